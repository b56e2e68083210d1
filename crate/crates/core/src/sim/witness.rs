use super::compare::SpectrumComparison;
use super::{synthesize_photocurrent, welch_psd, PsdEstimate, RecordSpec};
use crate::detection::{witness_of, Branch, PsdModel};
use crate::error::Result;

/// Monte-Carlo witness: Welch spectra of independently seeded sum- and
/// difference-port records with the same model constants, subtracted bin by
/// bin.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessEstimate {
    pub sum: PsdEstimate,
    pub difference: PsdEstimate,
    /// Estimated witness against `μ² Θ(-ν) J0(νδ/c_s)` (or zero in
    /// single-trajectory mode).
    pub comparison: SpectrumComparison,
}

pub fn monte_carlo_witness(model: &PsdModel, record: RecordSpec, segment_len: usize) -> Result<WitnessEstimate> {
    let sum_model = model.with_branch(Branch::Sum);
    let diff_model = model.with_branch(Branch::Difference);
    // The two ports draw from different stream tags of the same master seed.
    let sum_record = synthesize_photocurrent(&sum_model, record.n_samples, record.sample_rate, record.seed)?;
    let diff_record = synthesize_photocurrent(&diff_model, record.n_samples, record.sample_rate, record.seed)?;
    let sum = welch_psd(&sum_record, segment_len)?;
    let difference = welch_psd(&diff_record, segment_len)?;

    let nu = sum.angular_frequencies();
    let estimate = sum.density.iter().zip(&difference.density).map(|(s, d)| s - d).collect();
    let analytic = nu.iter().map(|&v| witness_of(model, v)).collect();
    let std_error = nu
        .iter()
        .map(|&v| {
            let a = sum.std_error_for(sum_model.psd(v));
            let b = difference.std_error_for(diff_model.psd(v));
            a.hypot(b)
        })
        .collect();
    Ok(WitnessEstimate {
        comparison: SpectrumComparison::assemble(nu, estimate, analytic, std_error),
        sum,
        difference,
    })
}

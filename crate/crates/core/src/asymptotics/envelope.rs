//! Per-region decay envelopes `|B̂(k)| ≲ envelope(k)`.

use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::engines::tail::radius_bound_ln;
use crate::error::Result;
use crate::norms::regions::{Region, RegionPartition};
use crate::params::{ratio_to_f64, BlaschkeParams};

/// Envelope of one coefficient, kept as a base-2 logarithm because the
/// exponential regions underflow a double.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub region: Region,
    pub log2: f64,
}

impl Envelope {
    pub fn value(&self) -> f64 {
        self.log2.exp2()
    }
}

pub fn decay_envelope(params: &BlaschkeParams, k: u64, alpha: &BigRational) -> Result<Envelope> {
    let part = RegionPartition::unchecked(params, alpha.clone())?;
    Ok(envelope_in(&part, k))
}

/// Envelope of `k` under an existing partition.
pub fn envelope_in(part: &RegionPartition, k: u64) -> Envelope {
    let params = part.params();
    let region = part.classify(k);
    let n = params.n() as f64;
    let kr = BigRational::from_integer(BigInt::from(k));
    // log2 of 1/|gap| for a positive exact gap; trivial bound otherwise
    let reciprocal = |gap: BigRational| {
        if gap.is_positive() {
            -ratio_to_f64(&gap).log2()
        } else {
            0.0
        }
    };
    let log2 = match region {
        Region::I | Region::VII => radius_bound_ln(params, k) / LN_2,
        Region::II => reciprocal(params.left_critical() - &kr),
        Region::VI => reciprocal(&kr - params.right_critical()),
        Region::III | Region::V => -n.log2() / 3.0,
        Region::IV => {
            let nr = BigRational::from_integer(BigInt::from(params.n()));
            let a = &kr / &nr;
            let prod = (&a - params.alpha0()) * (params.alpha0_inv() - &a);
            if prod.is_positive() {
                -0.5 * n.log2() - 0.25 * ratio_to_f64(&prod).log2()
            } else {
                0.0
            }
        }
    };
    Envelope { region, log2 }
}

use std::collections::BTreeMap;

use crate::engines::tail::tail_bound;
use crate::error::{Error, Result};
use crate::norms::exponent::Exponent;
use crate::norms::regions::{default_alpha, Region, RegionPartition};
use crate::series::{CoefficientSeries, Neumaier};

/// `ℓp` norm of a coefficient series with its decomposition over regions.
#[derive(Clone, Debug)]
pub struct NormReport {
    pub p: Exponent,
    /// Norm over the computed range `0..=kmax`.
    pub value: f64,
    /// `Σ |B̂(k)|^p` per region over the computed range (partial sup for
    /// `p = ∞`). Every region is present, possibly with zero mass.
    pub per_region_mass: BTreeMap<Region, f64>,
    /// Bound on the omitted `Σ_{k>kmax} |B̂(k)|^p` (on the omitted sup for
    /// `p = ∞`).
    pub tail_certificate: f64,
}

impl NormReport {
    /// `value^p` (just `value` for `p = ∞`).
    pub fn power_sum(&self) -> f64 {
        match self.p {
            Exponent::Infinity => self.value,
            Exponent::Finite(_) => self.value.powf(self.p.as_f64()),
        }
    }

    /// Region with the largest mass.
    pub fn dominant_region(&self) -> Region {
        *self
            .per_region_mass
            .iter()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(r, _)| r)
            .expect("seven regions")
    }
}

fn magnitude(v: f64, p: &Exponent) -> f64 {
    match p {
        Exponent::Infinity => v.abs(),
        Exponent::Finite(r) if *r.denom() == 1 && *r.numer() <= 64 => v.abs().powi(*r.numer() as i32),
        Exponent::Finite(_) => v.abs().powf(p.as_f64()),
    }
}

/// Bound on the omitted mass: each omitted `|B̂(k)|` is at most
/// `min(1, T)` and they sum to at most `T = tail_bound(kmax + 1)`.
pub fn tail_certificate(series: &CoefficientSeries, p: &Exponent) -> f64 {
    let t = tail_bound(&series.params, series.kmax() as u64 + 1);
    match p {
        Exponent::Infinity => t.min(1.0),
        Exponent::Finite(_) => t * t.min(1.0).powf(p.as_f64() - 1.0),
    }
}

/// Region decomposition used for reports: the default split `α₀/2`, without
/// the ordering check so that small `n` still gets a consistent partition.
fn report_partition(series: &CoefficientSeries) -> RegionPartition {
    RegionPartition::unchecked(&series.params, default_alpha(&series.params)).expect("alpha0/2 is a valid split")
}

pub fn lp_norm(series: &CoefficientSeries, p: &Exponent) -> Result<NormReport> {
    let part = report_partition(series);
    let mut acc = [Neumaier::default(); 7];
    let mut sup = [0.0f64; 7];
    for (k, v) in series.values.iter().enumerate() {
        let r = part.classify(k as u64).index();
        let m = magnitude(*v, p);
        acc[r].add(m);
        sup[r] = sup[r].max(m);
    }
    let per_region_mass: BTreeMap<Region, f64> = Region::ALL
        .iter()
        .map(|r| {
            let i = r.index();
            (*r, if p.is_infinite() { sup[i] } else { acc[i].total() })
        })
        .collect();
    let value = match p {
        Exponent::Infinity => sup.iter().copied().fold(0.0, f64::max),
        Exponent::Finite(_) => {
            let mut total = Neumaier::default();
            acc.iter().for_each(|a| total.add(a.total()));
            total.total().powf(1.0 / p.as_f64())
        }
    };
    let certificate = tail_certificate(series, p);
    let reference = if p.is_infinite() { value } else { value.powf(p.as_f64()) };
    // also rejects a NaN certificate
    if certificate.is_nan() || certificate > 0.01 * reference {
        return Err(Error::InsufficientRange {
            tail: certificate,
            mass: reference,
        });
    }
    Ok(NormReport {
        p: *p,
        value,
        per_region_mass,
        tail_certificate: certificate,
    })
}

/// `Σ_{k ∈ region} |B̂(k)|^p` (sup for `p = ∞`). Region VII adds the tail
/// certificate for the part beyond `kmax`, so its mass is an upper bound.
pub fn region_mass(
    series: &CoefficientSeries,
    partition: &RegionPartition,
    region: Region,
    p: &Exponent,
) -> Result<f64> {
    let Some((lo, hi)) = partition.range(region) else {
        return Ok(0.0);
    };
    let kmax = series.kmax() as u64;
    if let Some(hi) = hi {
        if hi > kmax {
            return Err(Error::Precondition(format!(
                "region {region} ends at {hi}, beyond the computed range {kmax}"
            )));
        }
    }
    let last = hi.unwrap_or(kmax);
    let mut acc = Neumaier::default();
    let mut sup = 0.0f64;
    if lo <= last && lo <= kmax {
        for v in &series.values[lo as usize..=last as usize] {
            let m = magnitude(*v, p);
            acc.add(m);
            sup = sup.max(m);
        }
    }
    if hi.is_none() {
        let t = tail_certificate(series, p);
        acc.add(t);
        sup = sup.max(t);
    }
    Ok(if p.is_infinite() { sup } else { acc.total() })
}

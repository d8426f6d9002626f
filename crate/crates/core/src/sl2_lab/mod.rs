//! Deformation engine for `sl2` over `A = Q[X]_(X)`.
//!
//! The deformed Verma module `M_A(lam + X)` has basis `v_0, v_1, ...` with
//!
//! ```text
//! h v_i = (lam + X - 2i) v_i,   f v_i = (i+1) v_{i+1},   e v_i = (lam + X + 1 - i) v_{i-1}
//! ```
//!
//! and its twisted partner `M^s_A(lam + X)` is the dual, with basis `v_i*` and
//! `f v_i* = (lam + X - i) v_{i+1}*`, `e v_i* = i v_{i-1}*`. All modules are
//! truncated to `v_0 ... v_N`; checks never certify the boundary index `N`.

pub mod local_ring;
pub mod poly;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::characters::{BlockContext, CharVector, Basis};
use crate::error::{Error, Result};
use crate::jantzen::sum_formula;
use crate::root_system::Weight;
use crate::weyl::WeylGroup;

pub use local_ring::LocalRingElem;
pub use poly::Poly;

pub const DEFAULT_TRUNCATION: usize = 12;

/// Action coefficients of `e`, `f`, `h` on a one-dimensional-weight-space module.
pub trait Sl2Action {
    /// Coefficient `c` with `h b_i = c b_i`.
    fn h(&self, i: usize) -> LocalRingElem;
    /// Coefficient `c` with `e b_i = c b_{i-1}` (zero for `i = 0`).
    fn e(&self, i: usize) -> LocalRingElem;
    /// Coefficient `c` with `f b_i = c b_{i+1}`.
    fn f(&self, i: usize) -> LocalRingElem;
}

fn deformed(lam: &BigRational, shift: i64) -> LocalRingElem {
    LocalRingElem::from_poly(Poly::shifted_x(lam + BigRational::from_integer(shift.into())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformedVerma {
    pub lam: BigRational,
    pub trunc: usize,
}

impl Sl2Action for DeformedVerma {
    fn h(&self, i: usize) -> LocalRingElem {
        deformed(&self.lam, -2 * i as i64)
    }

    fn e(&self, i: usize) -> LocalRingElem {
        if i == 0 {
            LocalRingElem::zero()
        } else {
            deformed(&self.lam, 1 - i as i64)
        }
    }

    fn f(&self, i: usize) -> LocalRingElem {
        LocalRingElem::from_int(i as i64 + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformedDual {
    pub lam: BigRational,
    pub trunc: usize,
}

impl Sl2Action for DeformedDual {
    fn h(&self, i: usize) -> LocalRingElem {
        deformed(&self.lam, -2 * i as i64)
    }

    fn e(&self, i: usize) -> LocalRingElem {
        LocalRingElem::from_int(i as i64)
    }

    fn f(&self, i: usize) -> LocalRingElem {
        deformed(&self.lam, -(i as i64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapDirection {
    /// `M_A(lam + X) -> M^s_A(lam + X)`, `v_i -> c_i v_i*`.
    VermaToDual,
    /// `M^s_A(lam + X) -> M_A(lam + X)`, `v_i* -> c_i v_i`.
    DualToVerma,
}

/// A weight-preserving `A`-linear map, one scalar per weight space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMap {
    pub direction: MapDirection,
    pub lam: BigRational,
    pub entries: Vec<LocalRingElem>,
}

impl WeightMap {
    pub fn trunc(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn valuations(&self) -> Vec<Option<usize>> {
        self.entries.iter().map(LocalRingElem::valuation).collect()
    }

    /// Entries after `X -> 0`.
    pub fn specialized(&self) -> Vec<BigRational> {
        self.entries.iter().map(LocalRingElem::specialize).collect()
    }

    /// Entrywise composite with a map in the opposite direction.
    pub fn compose(&self, other: &WeightMap) -> Vec<LocalRingElem> {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).collect()
    }
}

/// `lam` as a natural number, if it is one.
pub fn as_natural(lam: &BigRational) -> Option<u64> {
    if lam.is_integer() && !lam.is_negative() {
        lam.to_integer().to_u64()
    } else {
        None
    }
}

/// `binom(lam + X, i) = prod_{k<i} (lam + X - k) / i!`.
pub fn deformed_binomial(lam: &BigRational, i: usize) -> LocalRingElem {
    let mut product = Poly::one();
    let mut factorial = BigInt::one();
    for k in 0..i {
        product = &product * &Poly::shifted_x(lam - BigRational::from_integer(k.into()));
        factorial *= k + 1;
    }
    LocalRingElem::from_poly(product.scale(&BigRational::new(BigInt::one(), factorial)))
}

/// `phi(v_i) = binom(lam + X, i) v_i*`.
pub fn phi(lam: &BigRational, trunc: usize) -> WeightMap {
    WeightMap {
        direction: MapDirection::VermaToDual,
        lam: lam.clone(),
        entries: (0..=trunc).map(|i| deformed_binomial(lam, i)).collect(),
    }
}

/// The generator of `Hom(M^s_A(lam+X), M_A(lam+X))`.
///
/// For `lam` not a natural number this is the inverse of `phi`. For
/// `lam` natural it is `kappa X / binom(lam + X, i)` with
/// `kappa = (-1)^(lam+1) / (lam+1)`, normalized so that at `X = 0` it is
/// `0` for `i <= lam` and `(-1)^i binom(i, i - lam - 1)` for `i > lam`.
pub fn psi(lam: &BigRational, trunc: usize) -> WeightMap {
    let entries = match as_natural(lam) {
        None => (0..=trunc)
            .map(|i| deformed_binomial(lam, i).inverse().expect("binomials are units off N"))
            .collect(),
        Some(n) => {
            let sign = if n % 2 == 0 { -1 } else { 1 };
            let kappa = LocalRingElem::from_rational(BigRational::new(BigInt::from(sign), BigInt::from(n + 1)));
            let scaled_x = &kappa * &LocalRingElem::x();
            (0..=trunc)
                .map(|i| scaled_x.checked_div(&deformed_binomial(lam, i)).expect("valuation of binom is at most 1"))
                .collect()
        }
    };
    WeightMap { direction: MapDirection::DualToVerma, lam: lam.clone(), entries }
}

/// Checks that `map` commutes with `e`, `f`, `h` on indices `0 .. N-1`.
pub fn check_equivariance(map: &WeightMap) -> bool {
    let verma = DeformedVerma { lam: map.lam.clone(), trunc: map.trunc() };
    let dual = DeformedDual { lam: map.lam.clone(), trunc: map.trunc() };
    match map.direction {
        MapDirection::VermaToDual => equivariant(&verma, &dual, &map.entries),
        MapDirection::DualToVerma => equivariant(&dual, &verma, &map.entries),
    }
}

fn equivariant(source: &dyn Sl2Action, target: &dyn Sl2Action, c: &[LocalRingElem]) -> bool {
    let n = c.len() - 1;
    (0..n).all(|i| {
        let h_ok = &source.h(i) * &c[i] == &c[i] * &target.h(i);
        // map(f b_i) = f map(b_i)
        let f_ok = &source.f(i) * &c[i + 1] == &c[i] * &target.f(i);
        let e_ok = i == 0 || &source.e(i) * &c[i - 1] == &c[i] * &target.e(i);
        h_ok && f_ok && e_ok
    })
}

/// `sum_j dim M(lam)^j_{lam - 2i} = nu_X(binom(lam + X, i))` for `i = 0..=N`.
pub fn jantzen_layers_sl2(lam: &BigRational, trunc: usize) -> Vec<usize> {
    phi(lam, trunc)
        .valuations()
        .into_iter()
        .map(|v| v.expect("phi entries are nonzero"))
        .collect()
}

fn required_truncation(n: u64) -> usize {
    2 * n as usize + 4
}

fn natural_or_err(lam: &BigRational) -> Result<u64> {
    as_natural(lam).ok_or_else(|| Error::NotNatural(lam.to_string()))
}

/// Per-weight record of the specialized four-term sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourTermRow {
    pub index: usize,
    /// `dim M(-lam-2)` at weight `lam - 2i`.
    pub sub_dim: usize,
    pub phi_rank: usize,
    pub psi_rank: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourTermReport {
    pub lam: u64,
    pub rows: Vec<FourTermRow>,
    /// Kernel and image of the specialized maps are submodules of the right shape.
    pub submodules_ok: bool,
}

impl FourTermReport {
    pub fn passed(&self) -> bool {
        self.submodules_ok && self.rows.iter().all(|r| r.ok)
    }
}

/// Exactness of
/// `0 -> M(-lam-2) -> M(lam) -phi-> M^s(lam) -> M^s(-lam-2) -> 0` and
/// `0 -> M(lam)/M(-lam-2) -> M^s(lam) -psi-> M(lam) -> M(lam)/M(-lam-2) -> 0`
/// after `X -> 0`, weight by weight on `v_0 ... v_{N-1}`.
pub fn four_term_report(lam: &BigRational, trunc: usize) -> Result<FourTermReport> {
    let n = natural_or_err(lam)?;
    let needed = required_truncation(n);
    if trunc < needed {
        return Err(Error::TruncationTooSmall { trunc, needed });
    }
    let phi0 = phi(lam, trunc).specialized();
    let psi0 = psi(lam, trunc).specialized();
    let rank = |c: &BigRational| usize::from(!c.is_zero());
    let rows: Vec<FourTermRow> = (0..trunc)
        .map(|i| {
            let sub_dim = usize::from(i as u64 > n);
            let quot_dim = 1 - sub_dim;
            let (phi_rank, psi_rank) = (rank(&phi0[i]), rank(&psi0[i]));
            let phi_seq = 1 - phi_rank == sub_dim;
            let psi_seq = 1 - psi_rank == quot_dim;
            // psi . phi = 0 and im phi = ker psi
            let glued = (&phi0[i] * &psi0[i]).is_zero() && phi_rank == 1 - psi_rank;
            FourTermRow { index: i, sub_dim, phi_rank, psi_rank, ok: phi_seq && psi_seq && glued }
        })
        .collect();
    let zero_idx = |c: &[BigRational]| -> Vec<usize> { (0..trunc).filter(|&i| c[i].is_zero()).collect() };
    let nonzero_idx = |c: &[BigRational]| -> Vec<usize> { (0..trunc).filter(|&i| !c[i].is_zero()).collect() };
    let verma = DeformedVerma { lam: lam.clone(), trunc };
    let dual = DeformedDual { lam: lam.clone(), trunc };
    let ker_phi = zero_idx(&phi0);
    let submodules_ok = closed_at_zero(&verma, &ker_phi, trunc)
        && closed_at_zero(&dual, &nonzero_idx(&phi0), trunc)
        && closed_at_zero(&dual, &zero_idx(&psi0), trunc)
        && closed_at_zero(&verma, &nonzero_idx(&psi0), trunc)
        // the kernel of phi is generated in weight -lam-2
        && ker_phi.first() == Some(&(n as usize + 1));
    Ok(FourTermReport { lam: n, rows, submodules_ok })
}

pub fn four_term_rank_check(lam: &BigRational, trunc: usize) -> Result<bool> {
    Ok(four_term_report(lam, trunc)?.passed())
}

/// Is the span of `{b_i : i in indices}` stable under the specialized action?
fn closed_at_zero(module: &dyn Sl2Action, indices: &[usize], trunc: usize) -> bool {
    indices.iter().all(|&i| {
        let f_ok = i + 1 >= trunc || module.f(i).specialize().is_zero() || indices.contains(&(i + 1));
        let e_ok = i == 0 || module.e(i).specialize().is_zero() || indices.contains(&(i - 1));
        f_ok && e_ok
    })
}

/// Cokernel lengths over `A` on `v_0 ... v_{N-1}`: `nu_X(phi_i)` must be
/// `dim M(-lam-2)_{lam-2i}` and `nu_X(psi_i)` must be
/// `dim (M(lam)/M(-lam-2))_{lam-2i}`. For `lam` off `N` both maps are
/// isomorphisms and all lengths vanish.
pub fn coker_check_over_a(lam: &BigRational, trunc: usize) -> Result<bool> {
    let natural = as_natural(lam);
    if let Some(n) = natural {
        let needed = required_truncation(n);
        if trunc < needed {
            return Err(Error::TruncationTooSmall { trunc, needed });
        }
    }
    let phi_v = phi(lam, trunc).valuations();
    let psi_v = psi(lam, trunc).valuations();
    Ok((0..trunc).all(|i| {
        let (sub, quot) = match natural {
            Some(n) => (usize::from(i as u64 > n), usize::from(i as u64 <= n)),
            None => (0, 0),
        };
        phi_v[i] == Some(sub) && psi_v[i] == Some(quot)
    }))
}

/// One weight of the rank-one comparison between the deformation engine and
/// the sum formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    pub index: usize,
    pub weight: String,
    pub valuation: usize,
    pub sum_formula_dim: String,
}

/// Compares `nu_X(phi_i)` with `dim (sum_j ch M(lam)^j)_{lam - 2i}` computed by
/// the sum formula in the `A1` block containing `lam`.
pub fn compare_with_sum_formula(lam: &BigRational, trunc: usize) -> Result<Vec<OracleRow>> {
    let group = Arc::new(WeylGroup::from_label("A1")?);
    let base = if lam.is_integer() {
        let mirrored = -lam - BigRational::from_integer(2.into());
        if &mirrored < lam { mirrored } else { lam.clone() }
    } else {
        lam.clone()
    };
    let block = BlockContext::new(group, Weight::new(vec![base]))?;
    let top = Weight::new(vec![lam.clone()]);
    let y = block.param_of_weight(&top).ok_or_else(|| Error::NotInBlock(top.to_string()))?;
    let sum = sum_formula(&block, block.group().identity(), y)?;
    let vector: CharVector = sum.vector;
    debug_assert_eq!(vector.basis, Basis::Verma);
    let valuations = jantzen_layers_sl2(lam, trunc);
    let two = BigRational::from_integer(2.into());
    (0..=trunc)
        .map(|i| {
            let mu = lam - &two * BigRational::from_integer(i.into());
            let dim = block.dimension_at(&vector, &Weight::new(vec![mu.clone()]))?;
            Ok(OracleRow { index: i, weight: mu.to_string(), valuation: valuations[i], sum_formula_dim: dim.to_string() })
        })
        .collect()
}

pub fn oracle_rows_agree(rows: &[OracleRow]) -> bool {
    rows.iter().all(|r| r.sum_formula_dim == r.valuation.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2_lab::poly::rational;

    fn q(n: i64) -> BigRational {
        rational(n)
    }

    #[test]
    fn phi_examples() {
        for lam in [-3, 0, 1, 4] {
            assert_eq!(phi(&q(lam), 5).entries[0], LocalRingElem::one());
        }
        let entry = &phi(&q(1), 4).entries[2];
        let expected = Poly::new(vec![q(0), BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())]);
        assert_eq!(entry, &LocalRingElem::from_poly(expected));
        assert_eq!(entry.valuation(), Some(1));
        assert!(phi(&q(-3), 12).entries.iter().all(LocalRingElem::is_unit));
    }

    #[test]
    fn psi_examples() {
        let p = psi(&q(1), 6).specialized();
        assert_eq!(p[0], q(0));
        assert_eq!(p[1], q(0));
        assert_eq!(p[3], q(-3));
        for i in 2..=6i64 {
            // (-1)^i binom(i, i - 2)
            let sign = if i % 2 == 0 { 1 } else { -1 };
            assert_eq!(p[i as usize], q(sign * i * (i - 1) / 2));
        }
        assert_eq!(psi(&q(0), 4).specialized()[0], q(0));
        let lam = q(-3);
        let composite = psi(&lam, 8).compose(&phi(&lam, 8));
        assert!(composite.iter().all(|c| *c == LocalRingElem::one()));
    }

    #[test]
    fn equivariance() {
        for lam in [-3, -1, 0, 1, 2, 5] {
            assert!(check_equivariance(&phi(&q(lam), 12)), "phi {lam}");
            assert!(check_equivariance(&psi(&q(lam), 12)), "psi {lam}");
        }
        let half = BigRational::new(1.into(), 2.into());
        assert!(check_equivariance(&phi(&half, 8)));
        assert!(check_equivariance(&psi(&half, 8)));
        let naive = WeightMap {
            direction: MapDirection::VermaToDual,
            lam: q(1),
            entries: vec![LocalRingElem::one(); 13],
        };
        assert!(!check_equivariance(&naive));
    }

    #[test]
    fn undeformed_psi_is_not_equivariant_over_a() {
        // the undeformed formula, read over A
        let entries = psi(&q(1), 8).specialized().into_iter().map(LocalRingElem::from_rational).collect();
        let raw = WeightMap { direction: MapDirection::DualToVerma, lam: q(1), entries };
        assert!(!check_equivariance(&raw));
    }

    #[test]
    fn layer_examples() {
        assert_eq!(jantzen_layers_sl2(&q(3), 8), vec![0, 0, 0, 0, 1, 1, 1, 1, 1]);
        assert_eq!(jantzen_layers_sl2(&q(-3), 8), vec![0; 9]);
        assert_eq!(jantzen_layers_sl2(&q(0), 4), vec![0, 1, 1, 1, 1]);
    }

    #[test]
    fn four_term_examples() {
        assert!(four_term_rank_check(&q(1), 12).unwrap());
        assert!(four_term_rank_check(&q(0), 12).unwrap());
        assert_eq!(four_term_rank_check(&q(-2), 12), Err(Error::NotNatural("-2".into())));
        assert_eq!(four_term_rank_check(&q(5), 12), Err(Error::TruncationTooSmall { trunc: 12, needed: 14 }));
    }

    #[test]
    fn coker_examples() {
        assert!(coker_check_over_a(&q(2), 12).unwrap());
        assert!(coker_check_over_a(&q(0), 12).unwrap());
        assert!(coker_check_over_a(&q(-4), 12).unwrap());
        assert!(coker_check_over_a(&BigRational::new(1.into(), 3.into()), 12).unwrap());
        assert!(coker_check_over_a(&q(9), 12).is_err());
    }

    #[test]
    fn sum_formula_cross_check() {
        for lam in [-2, -1, 0, 3] {
            let rows = compare_with_sum_formula(&q(lam), 12).unwrap();
            assert!(oracle_rows_agree(&rows), "{lam}: {rows:?}");
        }
    }
}

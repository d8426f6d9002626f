//! The twisted Jantzen sum formula and its multiplicity-free layer readout.
//!
//! For a twist `w` and a highest weight `mu`, with
//! `R+(mu) = { beta > 0 : <mu + rho, beta^vee> in Z_{>0} }`,
//!
//! ```text
//! sum_{j>=1} ch M^w(mu)^j =   sum_{beta in R+(mu) ∩ R+(w)} (ch M(mu) - ch M(s_beta.mu))
//!                           + sum_{beta in R+(mu) \ R+(w)} ch M(s_beta.mu)
//! ```
//!
//! A pairing of exactly zero is excluded from `R+(mu)`: there `s_beta.mu = mu`
//! and both branches degenerate.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::characters::{Basis, BlockContext, CharVector};
use crate::error::{Error, Result};
use crate::root_system::{Root, Weight};
use crate::weyl::WeylElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumFormulaResult {
    /// Right-hand side in the Verma basis.
    pub vector: CharVector,
    pub rplus_mu: Vec<Root>,
    pub rplus_w: Vec<Root>,
}

/// Layer index of every composition factor of a multiplicity-free module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerTable {
    /// Block-parameter index of `L(x.lambda)` to its layer.
    pub layers: BTreeMap<usize, u32>,
    /// True when the 0-th layer is empty.
    pub zero_top: bool,
}

impl LayerTable {
    pub fn depth(&self) -> u32 {
        self.layers.values().copied().max().unwrap_or(0)
    }

    /// Rows `0..=depth`, each listing the parameters in that layer.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.depth() as usize + 1];
        for (&x, &k) in &self.layers {
            rows[k as usize].push(x);
        }
        rows
    }
}

/// `R+(mu)`: positive roots with `<mu + rho, beta^vee>` a strictly positive integer.
pub fn r_plus_of_weight(block: &BlockContext, mu: &Weight) -> Vec<Root> {
    let rs = block.group().root_system();
    let shifted = mu + rs.rho();
    rs.pairings(&shifted)
        .into_iter()
        .zip(rs.positive_roots())
        .filter(|(p, _)| p.is_integer() && p.is_positive())
        .map(|(_, r)| r.clone())
        .collect()
}

/// Sum formula for `M^w(y.lambda)`, with `y` given as a block parameter index.
pub fn sum_formula(block: &BlockContext, w: &WeylElement, y: usize) -> Result<SumFormulaResult> {
    let mu = block.weight(y).clone();
    twisted_sum(block, w, &mu, y)
}

/// Sum formula for `M^w(mu)` with an explicit highest weight in the block.
pub fn sum_formula_at_weight(block: &BlockContext, w: &WeylElement, mu: &Weight) -> Result<SumFormulaResult> {
    let y = block.param_of_weight(mu).ok_or_else(|| Error::NotInBlock(mu.to_string()))?;
    twisted_sum(block, w, mu, y)
}

fn twisted_sum(block: &BlockContext, w: &WeylElement, mu: &Weight, y: usize) -> Result<SumFormulaResult> {
    let rs = block.group().root_system();
    let rplus_w = rs.inversion_set(w)?.roots;
    let rplus_mu = r_plus_of_weight(block, mu);
    let mut vector = CharVector::zero(Basis::Verma);
    for beta in &rplus_mu {
        let reflected = rs.reflect_dot(beta, mu)?;
        let target = block.param_of_weight(&reflected).ok_or_else(|| Error::NotInBlock(reflected.to_string()))?;
        if rplus_w.contains(beta) {
            vector.add_term(y, 1);
            vector.add_term(target, -1);
        } else {
            vector.add_term(target, 1);
        }
    }
    Ok(SumFormulaResult { vector, rplus_mu, rplus_w })
}

/// The `(x, y)` form for `M(x, y)` in a regular integral antidominant block:
///
/// ```text
/// sum_{beta in R+(xy) \ R+(x)} (ch M(xy.lambda) - ch M(s_beta xy.lambda))
///   + sum_{beta in R+(xy) ∩ R+(x)} ch M(s_beta xy.lambda)
/// ```
///
/// Implemented on its own terms; it agrees with [`sum_formula`] for the twist
/// `x w0` and highest weight `xy.lambda`.
pub fn sum_formula_xy(block: &BlockContext, x: &WeylElement, y: &WeylElement) -> Result<SumFormulaResult> {
    if !(block.is_regular() && block.is_integral()) {
        return Err(Error::SingularBlock);
    }
    let g = block.group();
    let rs = g.root_system();
    let xy = rs.multiply(x, y)?;
    let rplus_x = rs.inversion_set(x)?.roots;
    let rplus_xy = rs.inversion_set(&xy)?.roots;
    let top = block.param_of_element(&xy).ok_or_else(|| Error::Internal("xy is not a block parameter".into()))?;
    let mut vector = CharVector::zero(Basis::Verma);
    for beta in &rplus_xy {
        let reflection = reflection_element(block, beta)?;
        let target = block
            .param_of_element(&rs.multiply(&reflection, &xy)?)
            .ok_or_else(|| Error::Internal("s_beta xy is not a block parameter".into()))?;
        if rplus_x.contains(beta) {
            vector.add_term(target, 1);
        } else {
            vector.add_term(top, 1);
            vector.add_term(target, -1);
        }
    }
    Ok(SumFormulaResult { vector, rplus_mu: rplus_xy, rplus_w: rplus_x })
}

/// The reflection `s_beta` as a group element: the unique element of `W`
/// sending `beta` to `-beta` and fixing the hyperplane orthogonal to it.
fn reflection_element(block: &BlockContext, beta: &Root) -> Result<WeylElement> {
    let rs = block.group().root_system();
    let n = rs.rank();
    let norm = rs.inner_product(&beta.coords, &beta.coords);
    for w in block.group().elements() {
        let mut ok = true;
        for j in 0..n {
            // s_beta(alpha_j) = alpha_j - (2 (alpha_j, beta) / (beta, beta)) beta
            let simple = rs.simple_root(j);
            let k = 2 * rs.inner_product(&simple.coords, &beta.coords);
            if k % norm != 0 {
                return Err(Error::Internal("non-integral root string".into()));
            }
            let expected: Vec<i64> =
                simple.coords.iter().zip(&beta.coords).map(|(a, b)| a - (k / norm) * b).collect();
            if rs.apply_root(w, &simple)?.coords != expected {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(w.clone());
        }
    }
    Err(Error::NotARoot(beta.coords.clone()))
}

/// Reads the Jantzen layers off the sum formula when every composition factor
/// of `M(y.lambda)` occurs once: a factor in layer `k` contributes exactly `k`
/// to `sum_{j>=1} ch M^j`, so its coefficient in the simple basis is its layer.
pub fn layers_multiplicity_free(block: &BlockContext, w: &WeylElement, y: usize) -> Result<LayerTable> {
    if !(block.is_regular() && block.is_integral()) {
        return Err(Error::SingularBlock);
    }
    let d = block.decomposition_matrix()?;
    if let Some((x, &m)) = d.entries[y].iter().enumerate().find(|(_, &m)| m > 1) {
        return Err(Error::NotMultiplicityFree { param: block.param_name(x), multiplicity: m });
    }
    let sum = sum_formula(block, w, y)?;
    let simple = block.change_basis(&sum.vector, Basis::Simple)?;
    let mut layers = BTreeMap::new();
    for (x, &m) in d.entries[y].iter().enumerate() {
        let c = simple.coeff(x);
        if m == 0 {
            if c != 0 {
                return Err(Error::InconsistentSumFormula(format!(
                    "L({}) is not a factor but has coefficient {c}",
                    block.param_name(x)
                )));
            }
            continue;
        }
        if c < 0 {
            return Err(Error::InconsistentSumFormula(format!("L({}) has coefficient {c}", block.param_name(x))));
        }
        layers.insert(x, c as u32);
    }
    let zero_top = !layers.values().any(|&k| k == 0);
    Ok(LayerTable { layers, zero_top })
}

/// `(w, y) -> (w w0, y)`: the twist of the dual module `D M^w(y.lambda)`.
pub fn duality_partner(block: &BlockContext, w: &WeylElement, y: usize) -> Result<(WeylElement, usize)> {
    let g = block.group();
    Ok((g.multiply(w, g.longest())?, y))
}

/// Every sum-formula vector must have a nonnegative simple-basis expansion;
/// returns the offending parameter otherwise.
pub fn first_negative_simple_coefficient(block: &BlockContext, v: &CharVector) -> Result<Option<(usize, i64)>> {
    let simple = block.change_basis(v, Basis::Simple)?;
    let found = simple.terms().find(|&(_, c)| c < 0);
    Ok(found)
}

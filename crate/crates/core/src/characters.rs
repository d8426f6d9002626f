//! Formal characters over a block of category O.
//!
//! A character is a finite integer combination of the basis symbols
//! `ch M(y.lambda)` (Verma basis) or `ch L(x.lambda)` (simple basis), indexed
//! by the block parameters. Twisted Verma modules `M^w(mu)` carry the Verma
//! character `ch M(mu)` for every twist `w`, so they are entered here through
//! the plain Verma basis vector of their highest weight.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root_system::{KostantTable, Weight};
use crate::weyl::{WeylElement, WeylGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Verma,
    Simple,
}

/// Integer combination of basis symbols keyed by block-parameter index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharVector {
    pub basis: Basis,
    coeffs: BTreeMap<usize, i64>,
}

impl CharVector {
    pub fn zero(basis: Basis) -> Self {
        CharVector { basis, coeffs: BTreeMap::new() }
    }

    pub fn unit(basis: Basis, param: usize) -> Self {
        let mut v = Self::zero(basis);
        v.add_term(param, 1);
        v
    }

    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut v = Self::zero(basis);
        for (p, c) in terms {
            v.add_term(p, c);
        }
        v
    }

    pub fn add_term(&mut self, param: usize, coeff: i64) {
        let entry = self.coeffs.entry(param).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&param);
        }
    }

    pub fn coeff(&self, param: usize) -> i64 {
        self.coeffs.get(&param).copied().unwrap_or(0)
    }

    /// Nonzero terms in parameter order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&p, &c)| (p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn plus(&self, other: &CharVector) -> CharVector {
        assert_eq!(self.basis, other.basis, "adding vectors in different bases");
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(p, c);
        }
        out
    }

    pub fn scaled(&self, k: i64) -> CharVector {
        CharVector::from_terms(self.basis, self.terms().map(|(p, c)| (p, c * k)))
    }
}

/// `entries[y][x] = [M(y.lambda) : L(x.lambda)]` over the block parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionMatrix {
    pub entries: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
}

impl DecompositionMatrix {
    /// Validates unipotence and computes the exact inverse as the finite
    /// Neumann series `sum_k (I - D)^k`.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidDecompositionMatrix("matrix is not square".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row[i] != 1 {
                return Err(Error::InvalidDecompositionMatrix(format!("diagonal entry {i} is {}", row[i])));
            }
        }
        let nilpotent: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0 } else { -entries[i][j] }).collect())
            .collect();
        let mut inverse = identity(n);
        let mut power = identity(n);
        for _ in 0..n {
            power = mul(&power, &nilpotent);
            if power.iter().flatten().all(|&x| x == 0) {
                break;
            }
            for i in 0..n {
                for j in 0..n {
                    inverse[i][j] += power[i][j];
                }
            }
        }
        if power.iter().flatten().any(|&x| x != 0) {
            return Err(Error::InvalidDecompositionMatrix("matrix is not unitriangular".into()));
        }
        debug_assert_eq!(mul(&entries, &inverse), identity(n));
        Ok(DecompositionMatrix { entries, inverse })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub(crate) fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0; m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            let aik = a[i][k];
            if aik != 0 {
                for j in 0..m {
                    out[i][j] += aik * bk[j];
                }
            }
        }
    }
    out
}

/// User-supplied decomposition matrix file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub params: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
}

/// A block `O_lambda` with antidominant base point `lam`.
pub struct BlockContext {
    group: Arc<WeylGroup>,
    lam: Weight,
    params: Vec<WeylElement>,
    weights: Vec<Weight>,
    weight_index: HashMap<Weight, usize>,
    regular: bool,
    integral: bool,
    decomposition: Option<DecompositionMatrix>,
}

impl fmt::Debug for BlockContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockContext")
            .field("lam", &self.lam.to_string())
            .field("params", &self.params.len())
            .field("regular", &self.regular)
            .field("integral", &self.integral)
            .finish()
    }
}

impl BlockContext {
    /// Builds the block of an antidominant weight. Parameters are the
    /// minimal-length representatives `y` of the distinct weights `y.lam`
    /// with `y` in the integral Weyl group `{w : w(lam+rho) - (lam+rho) in ZR}`,
    /// ordered by length and ShortLex.
    pub fn new(group: Arc<WeylGroup>, lam: Weight) -> Result<Self> {
        let rs = group.root_system();
        if lam.rank() != rs.rank() {
            return Err(Error::DimensionMismatch { expected: rs.rank(), got: lam.rank() });
        }
        let class = rs.classify_weight(&lam);
        if !class.antidominant_relative {
            return Err(Error::NotAntidominant(lam.to_string()));
        }
        let shifted = &lam + rs.rho();
        let mut params = Vec::new();
        let mut weights = Vec::new();
        let mut weight_index = HashMap::new();
        for w in group.elements() {
            let image = rs.apply_weight(w, &shifted)?;
            if rs.root_lattice_coords(&(&image - &shifted)).is_none() {
                continue;
            }
            let mu = &image - rs.rho();
            if !weight_index.contains_key(&mu) {
                weight_index.insert(mu.clone(), params.len());
                params.push(w.clone());
                weights.push(mu);
            }
        }
        let mut block = BlockContext {
            group,
            lam,
            params,
            weights,
            weight_index,
            regular: class.regular,
            integral: class.integral,
            decomposition: None,
        };
        if block.regular && block.integral && block.rank() <= 2 {
            block.decomposition = Some(block.trivial_kl_matrix());
        }
        Ok(block)
    }

    /// Block of `-2 rho`, the default regular integral antidominant weight.
    pub fn default_regular(group: Arc<WeylGroup>) -> Result<Self> {
        let lam = group.root_system().rho().scale(&num_rational::BigRational::from_integer((-2).into()));
        Self::new(group, lam)
    }

    fn trivial_kl_matrix(&self) -> DecompositionMatrix {
        let idx: Vec<usize> = self.params.iter().map(|p| self.group.index_of(p).unwrap()).collect();
        let entries = idx
            .iter()
            .map(|&y| idx.iter().map(|&x| i64::from(self.group.bruhat_leq_idx(x, y))).collect())
            .collect();
        DecompositionMatrix::new(entries).expect("Bruhat incidence matrix is unitriangular")
    }

    /// Installs a user-supplied decomposition matrix after validation.
    pub fn with_decomposition_file(mut self, file: &DecompositionFile) -> Result<Self> {
        let n = self.params.len();
        if file.params.len() != n || file.matrix.len() != n {
            return Err(Error::InvalidDecompositionMatrix(format!("expected {n} parameters")));
        }
        let mut order = Vec::with_capacity(n);
        for name in &file.params {
            let w = self.group.parse(name)?;
            let k = self
                .param_of_element(&w)
                .ok_or_else(|| Error::InvalidDecompositionMatrix(format!("`{name}` is not a block parameter")))?;
            if order.contains(&k) {
                return Err(Error::InvalidDecompositionMatrix(format!("parameter `{name}` repeated")));
            }
            order.push(k);
        }
        let mut entries = vec![vec![0i64; n]; n];
        for (r, row) in file.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidDecompositionMatrix("matrix is not square".into()));
            }
            for (c, &v) in row.iter().enumerate() {
                entries[order[r]][order[c]] = v;
            }
        }
        let rs = self.group.root_system();
        for y in 0..n {
            for x in 0..n {
                let v = entries[y][x];
                if v < 0 {
                    return Err(Error::InvalidDecompositionMatrix("negative multiplicity".into()));
                }
                if v == 0 || x == y {
                    continue;
                }
                // [M(mu) : L(nu)] != 0 forces mu - nu in N R+
                let below = rs
                    .root_lattice_coords(&(&self.weights[y] - &self.weights[x]))
                    .is_some_and(|c| c.iter().all(|&k| k >= 0));
                let bruhat = !(self.regular && self.integral)
                    || self.group.bruhat_leq(&self.params[x], &self.params[y]).unwrap_or(false);
                if !below || !bruhat {
                    return Err(Error::InvalidDecompositionMatrix(format!(
                        "entry [{}][{}] violates the order",
                        self.param_name(y),
                        self.param_name(x)
                    )));
                }
            }
        }
        self.decomposition = Some(DecompositionMatrix::new(entries)?);
        Ok(self)
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn base_weight(&self) -> &Weight {
        &self.lam
    }

    pub fn params(&self) -> &[WeylElement] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// `y.lam` for parameter index `k`.
    pub fn weight(&self, k: usize) -> &Weight {
        &self.weights[k]
    }

    pub fn param_of_weight(&self, mu: &Weight) -> Option<usize> {
        self.weight_index.get(mu).copied()
    }

    /// Parameter index of `w.lam` for any Weyl group element `w`.
    pub fn param_of_element(&self, w: &WeylElement) -> Option<usize> {
        let mu = self.group.root_system().dot_action(w, &self.lam).ok()?;
        self.param_of_weight(&mu)
    }

    pub fn param_name(&self, k: usize) -> String {
        self.group.name(&self.params[k])
    }

    pub fn decomposition_matrix(&self) -> Result<&DecompositionMatrix> {
        self.decomposition.as_ref().ok_or(Error::NeedsUserMatrix)
    }

    pub fn change_basis(&self, v: &CharVector, to: Basis) -> Result<CharVector> {
        if v.basis == to {
            return Ok(v.clone());
        }
        let d = self.decomposition_matrix()?;
        let table = match to {
            Basis::Simple => &d.entries,
            Basis::Verma => &d.inverse,
        };
        let mut out = CharVector::zero(to);
        for (row, c) in v.terms() {
            for (col, &m) in table[row].iter().enumerate() {
                if m != 0 {
                    out.add_term(col, c * m);
                }
            }
        }
        Ok(out)
    }

    /// Dimension of the weight space of weight `mu` in the virtual module with
    /// character `v`, through `dim M(nu)_mu = P(nu - mu)`.
    pub fn dimension_at(&self, v: &CharVector, mu: &Weight) -> Result<BigInt> {
        let verma = self.change_basis(v, Basis::Verma)?;
        let rs = self.group.root_system();
        let mut kostant = KostantTable::new(rs);
        let mut total = BigInt::zero();
        for (y, c) in verma.terms() {
            if let Some(nu) = rs.root_lattice_coords(&(&self.weights[y] - mu)) {
                total += BigInt::from(c) * BigInt::from(kostant.count(&nu));
            }
        }
        Ok(total)
    }
}

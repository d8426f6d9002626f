//! Finite root systems built from Cartan data.
//!
//! Roots carry integer coordinates in the basis of simple roots; weights carry
//! exact rational coordinates in the basis of fundamental weights, so that
//! `coords[i] = <lambda, alpha_i^vee>`. The Cartan matrix uses the convention
//! `a_ij = <alpha_i^vee, alpha_j>`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static NEXT_SYSTEM_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    pub rank: usize,
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CartanData {
    pub fn new(matrix: Vec<Vec<i64>>, label: Option<String>) -> Result<Self> {
        let data = CartanData { rank: matrix.len(), matrix, label };
        data.validate()?;
        Ok(data)
    }

    /// Cartan data for a type label such as `A2`, `B2`, `G2` or `F4`.
    ///
    /// `B_n` is labelled with `alpha_1` short and `C_n` with `alpha_1` long;
    /// the double bond sits between nodes 1 and 2 in both. `G2` has `alpha_1`
    /// short. `F4`, `D_n` and `E_n` follow Bourbaki.
    pub fn from_label(label: &str) -> Result<Self> {
        let unknown = || Error::UnknownType(label.to_string());
        let trimmed = label.trim();
        let mut chars = trimmed.chars();
        let family = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let chain = |n: usize| {
            let mut m = vec![vec![0i64; n]; n];
            for i in 0..n {
                m[i][i] = 2;
                if i + 1 < n {
                    m[i][i + 1] = -1;
                    m[i + 1][i] = -1;
                }
            }
            m
        };
        let matrix = match (family, n) {
            ('A', n) if n >= 1 => chain(n),
            ('B', n) if n >= 2 => {
                let mut m = chain(n);
                m[0][1] = -2;
                m
            }
            ('C', n) if n >= 2 => {
                let mut m = chain(n);
                m[1][0] = -2;
                m
            }
            ('D', n) if n >= 3 => {
                let mut m = chain(n);
                m[n - 2][n - 1] = 0;
                m[n - 1][n - 2] = 0;
                m[n - 3][n - 1] = -1;
                m[n - 1][n - 3] = -1;
                m
            }
            ('E', n) if (6..=8).contains(&n) => {
                // Bourbaki: 1-3-4-5-..., with 2 attached to 4.
                let mut m = vec![vec![0i64; n]; n];
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = 2;
                }
                let mut bond = |a: usize, b: usize| {
                    m[a][b] = -1;
                    m[b][a] = -1;
                };
                bond(0, 2);
                bond(1, 3);
                for i in 2..n - 1 {
                    bond(i, i + 1);
                }
                m
            }
            ('F', 4) => vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -1, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ],
            ('G', 2) => vec![vec![2, -3], vec![-1, 2]],
            _ => return Err(unknown()),
        };
        CartanData::new(matrix, Some(format!("{family}{n}")))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.rank;
        if n == 0 {
            return Err(Error::InvalidCartan("rank must be positive".into()));
        }
        if self.matrix.len() != n || self.matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidCartan(format!("matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if self.matrix[i][i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry ({i},{i}) is not 2")));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if self.matrix[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!("off-diagonal entry ({i},{j}) is positive")));
                }
                if (self.matrix[i][j] == 0) != (self.matrix[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("entries ({i},{j}) and ({j},{i}) disagree on vanishing")));
                }
            }
        }
        Ok(())
    }
}

/// A root in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root {
    pub coords: Vec<i64>,
}

impl Root {
    pub fn new(coords: Vec<i64>) -> Self {
        Root { coords }
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        Root { coords }
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0) && self.coords.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.coords.iter().all(|&c| c <= 0) && self.coords.iter().any(|&c| c < 0)
    }
}

impl Neg for &Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for Root {
    /// Written as a sum of simple roots, e.g. `2a1+a2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "a{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<BigRational>,
}

impl Weight {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Weight { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight { coords: coords.iter().map(|&c| BigRational::from_integer(c.into())).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![BigRational::zero(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, k: &BigRational) -> Weight {
        Weight { coords: self.coords.iter().map(|c| c * k).collect() }
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Comma-separated rationals, optionally parenthesised: `-2,-2` or `(1/2, -3)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadWeight(s.to_string());
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Err(bad());
        }
        let coords = body
            .split(',')
            .map(|part| parse_rational(part.trim()).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        Ok(Weight { coords })
    }
}

/// Parses `3`, `-7`, or `-1/2`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Result of [`RootSystem::classify_weight`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightClass {
    pub integral: bool,
    pub regular: bool,
    /// `<lambda + rho, alpha^vee> <= 0` for every simple root.
    pub antidominant: bool,
    /// `<lambda + rho, alpha^vee> >= 0` for every simple root.
    pub dominant: bool,
    /// Antidominance measured only on the integral positive roots `R(lambda) ∩ R+`.
    pub antidominant_relative: bool,
    pub dominant_relative: bool,
}

#[derive(Debug)]
pub struct RootSystem {
    id: u64,
    cartan: CartanData,
    positive_roots: Vec<Root>,
    root_index: HashMap<Root, usize>,
    symmetrizer: Vec<i64>,
    /// `(beta, beta)` for each positive root under the symmetrized form.
    norms: Vec<i64>,
    rho: Weight,
    cartan_inverse: Vec<Vec<BigRational>>,
}

impl RootSystem {
    pub fn new(cartan: CartanData) -> Result<Self> {
        cartan.validate()?;
        let n = cartan.rank;
        let symmetrizer = symmetrizer(&cartan.matrix)?;
        check_positive_definite(&cartan.matrix, &symmetrizer)?;
        let mut positive_roots = generate_positive_roots(&cartan.matrix)?;
        positive_roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.coords.cmp(&a.coords)));
        let root_index = positive_roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let norms = positive_roots.iter().map(|r| form(&cartan.matrix, &symmetrizer, &r.coords, &r.coords)).collect();
        let cartan_inverse = invert(&cartan.matrix)
            .ok_or_else(|| Error::NotFiniteType("Cartan matrix is singular".into()))?;
        let rs = RootSystem {
            id: NEXT_SYSTEM_ID.fetch_add(1, Ordering::Relaxed),
            rho: Weight::from_ints(&vec![1; n]),
            cartan,
            positive_roots,
            root_index,
            symmetrizer,
            norms,
            cartan_inverse,
        };
        Ok(rs)
    }

    pub fn from_label(label: &str) -> Result<Self> {
        RootSystem::new(CartanData::from_label(label)?)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn label(&self) -> Option<&str> {
        self.cartan.label.as_deref()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn simple_root(&self, i: usize) -> Root {
        Root::simple(self.rank(), i)
    }

    pub fn positive_index(&self, beta: &Root) -> Option<usize> {
        self.root_index.get(beta).copied()
    }

    pub fn is_root(&self, beta: &Root) -> bool {
        self.root_index.contains_key(beta) || self.root_index.contains_key(&-beta)
    }

    /// `(x, y)` for root-lattice vectors, using `(alpha_i, alpha_j) = d_i a_ij`.
    pub fn inner_product(&self, x: &[i64], y: &[i64]) -> i64 {
        form(&self.cartan.matrix, &self.symmetrizer, x, y)
    }

    /// `<lambda, beta^vee> = 2 (lambda, beta) / (beta, beta)`.
    pub fn pairing(&self, lam: &Weight, beta: &Root) -> Result<BigRational> {
        self.check_rank(lam.rank())?;
        let (index, sign) = match self.positive_index(beta) {
            Some(i) => (i, 1),
            None => match self.positive_index(&-beta) {
                Some(i) => (i, -1),
                None => return Err(Error::NotARoot(beta.coords.clone())),
            },
        };
        let positive = &self.positive_roots[index];
        Ok(self.coroot_pairing(lam, &positive.coords, self.norms[index]) * BigInt::from(sign))
    }

    // beta^vee = sum_j (2 c_j d_j / (beta, beta)) alpha_j^vee
    fn coroot_pairing(&self, lam: &Weight, coords: &[i64], norm: i64) -> BigRational {
        let mut acc = BigRational::zero();
        for (j, &c) in coords.iter().enumerate() {
            if c != 0 {
                acc += BigRational::from_integer(BigInt::from(2 * c * self.symmetrizer[j])) * &lam.coords[j];
            }
        }
        acc / BigRational::from_integer(BigInt::from(norm))
    }

    /// Pairings `<lambda, beta^vee>` for all positive roots, in root order.
    pub fn pairings(&self, lam: &Weight) -> Vec<BigRational> {
        self.positive_roots
            .iter()
            .zip(&self.norms)
            .map(|(r, &n)| self.coroot_pairing(lam, &r.coords, n))
            .collect()
    }

    /// Weight-basis coordinates of a root-lattice vector.
    pub fn root_to_weight(&self, coords: &[i64]) -> Weight {
        let n = self.rank();
        Weight {
            coords: (0..n)
                .map(|k| {
                    let s: i64 = (0..n).map(|j| self.cartan.matrix[k][j] * coords[j]).sum();
                    BigRational::from_integer(s.into())
                })
                .collect(),
        }
    }

    /// Simple-root coordinates of an arbitrary weight (rational in general).
    pub fn weight_to_root_coords(&self, lam: &Weight) -> Vec<BigRational> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).fold(BigRational::zero(), |acc, j| acc + &self.cartan_inverse[i][j] * &lam.coords[j]))
            .collect()
    }

    /// Integer simple-root coordinates if `lam` lies in the root lattice.
    pub fn root_lattice_coords(&self, lam: &Weight) -> Option<Vec<i64>> {
        self.weight_to_root_coords(lam)
            .into_iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    /// Positive roots `beta` with `<lambda, beta^vee>` an integer.
    pub fn integral_roots(&self, lam: &Weight) -> Vec<Root> {
        self.pairings(lam)
            .into_iter()
            .zip(&self.positive_roots)
            .filter(|(p, _)| p.is_integer())
            .map(|(_, r)| r.clone())
            .collect()
    }

    pub fn classify_weight(&self, lam: &Weight) -> WeightClass {
        let shifted = lam + &self.rho;
        let pairings = self.pairings(&shifted);
        let simple: Vec<&BigRational> = (0..self.rank()).map(|i| &shifted.coords[i]).collect();
        let integral_pairings: Vec<&BigRational> = pairings.iter().filter(|p| p.is_integer()).collect();
        WeightClass {
            integral: lam.is_integral(),
            regular: pairings.iter().all(|p| !p.is_zero()),
            antidominant: simple.iter().all(|p| !p.is_positive()),
            dominant: simple.iter().all(|p| !p.is_negative()),
            antidominant_relative: integral_pairings.iter().all(|p| !p.is_positive()),
            dominant_relative: integral_pairings.iter().all(|p| !p.is_negative()),
        }
    }

    /// Kostant partition function: the number of multisets of positive roots
    /// summing to `nu`.
    pub fn kostant_partition(&self, nu: &[i64]) -> BigUint {
        KostantTable::new(self).count(nu)
    }

    fn check_rank(&self, got: usize) -> Result<()> {
        if got != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got });
        }
        Ok(())
    }
}

/// Memoized Kostant partition function for repeated queries against one
/// root system.
pub struct KostantTable<'a> {
    rs: &'a RootSystem,
    memo: HashMap<(usize, Vec<i64>), BigUint>,
}

impl<'a> KostantTable<'a> {
    pub fn new(rs: &'a RootSystem) -> Self {
        KostantTable { rs, memo: HashMap::new() }
    }

    pub fn count(&mut self, nu: &[i64]) -> BigUint {
        if nu.iter().any(|&c| c < 0) {
            return BigUint::zero();
        }
        self.count_using(self.rs.positive_roots.len(), nu.to_vec())
    }

    // Conditions on the multiplicity of the last of the first `k` roots.
    fn count_using(&mut self, k: usize, nu: Vec<i64>) -> BigUint {
        if nu.iter().all(|&c| c == 0) {
            return BigUint::one();
        }
        if k == 0 {
            return BigUint::zero();
        }
        if let Some(hit) = self.memo.get(&(k, nu.clone())) {
            return hit.clone();
        }
        let beta = self.rs.positive_roots[k - 1].coords.clone();
        let mut total = BigUint::zero();
        let mut rest = nu.clone();
        loop {
            total += self.count_using(k - 1, rest.clone());
            for (r, b) in rest.iter_mut().zip(&beta) {
                *r -= b;
            }
            if rest.iter().any(|&c| c < 0) {
                break;
            }
        }
        self.memo.insert((k, nu), total.clone());
        total
    }
}

fn form(matrix: &[Vec<i64>], d: &[i64], x: &[i64], y: &[i64]) -> i64 {
    let n = matrix.len();
    let mut s = 0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            s += x[i] * y[j] * d[i] * matrix[i][j];
        }
    }
    s
}

/// Minimal positive integers `d_i` with `d_i a_ij = d_j a_ji`.
fn symmetrizer(matrix: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = matrix.len();
    let mut d: Vec<Option<BigRational>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(BigRational::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                if i == j || matrix[i][j] == 0 {
                    continue;
                }
                // d_j = d_i a_ij / a_ji
                let dj = &di * BigRational::new(matrix[i][j].into(), matrix[j][i].into());
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                    Some(existing) if *existing != dj => {
                        return Err(Error::InvalidCartan("matrix is not symmetrizable".into()));
                    }
                    _ => {}
                }
            }
        }
    }
    let d: Vec<BigRational> = d.into_iter().map(|x| x.unwrap()).collect();
    let lcm = d.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = d.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| (x / &gcd).to_i64().ok_or_else(|| Error::InvalidCartan("symmetrizer overflow".into())))
        .collect()
}

/// Sylvester's criterion on the symmetrized matrix `d_i a_ij`.
fn check_positive_definite(matrix: &[Vec<i64>], d: &[i64]) -> Result<()> {
    let n = matrix.len();
    let sym: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer((d[i] * matrix[i][j]).into())).collect())
        .collect();
    for k in 1..=n {
        let minor: Vec<Vec<BigRational>> = sym[..k].iter().map(|row| row[..k].to_vec()).collect();
        if !determinant(minor).is_positive() {
            return Err(Error::NotFiniteType(format!("leading principal minor of order {k} is not positive")));
        }
    }
    Ok(())
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            let factor = &m[r][col] / &m[col][col];
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

fn invert(matrix: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<BigRational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Closure of the simple roots under root strings, processed by height.
fn generate_positive_roots(matrix: &[Vec<i64>]) -> Result<Vec<Root>> {
    let n = matrix.len();
    let bound = 10 * n * n;
    let mut known: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..n).map(|i| Root::simple(n, i).coords).collect();
    let mut all = Vec::new();
    known.extend(layer.iter().cloned());
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // p = largest k with beta - k alpha_i a root
                let mut p = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if known.contains(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = (0..n).map(|j| matrix[i][j] * beta[j]).sum();
                if p - pair > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.append(&mut layer);
        if all.len() + next.len() > bound {
            return Err(Error::NotFiniteType(format!("root generation exceeded {bound} roots")));
        }
        layer = next;
    }
    Ok(all.into_iter().map(Root::new).collect())
}

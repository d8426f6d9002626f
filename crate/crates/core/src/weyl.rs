//! Weyl group elements, reduced words, inversion sets and Bruhat order.
//!
//! An element is canonically its integer matrix acting on simple-root
//! coordinates; the ShortLex-minimal reduced word is derived from it.
//! Simple reflections are numbered from 1 in every public API.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::root_system::{Root, RootSystem, Weight};

pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

#[derive(Clone)]
pub struct WeylElement {
    system: u64,
    rank: usize,
    /// Row-major; column `j` holds `w(alpha_j)`.
    matrix: Vec<i64>,
    word: Vec<usize>,
}

impl WeylElement {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn matrix(&self) -> &[i64] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn system_id(&self) -> u64 {
        self.system
    }

    fn column(&self, j: usize) -> impl Iterator<Item = i64> + '_ {
        (0..self.rank).map(move |i| self.matrix[i * self.rank + j])
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.system.hash(state);
        self.matrix.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    /// Length first, then ShortLex on canonical words.
    fn cmp(&self, other: &Self) -> Ordering {
        self.system
            .cmp(&other.system)
            .then(self.word.len().cmp(&other.word.len()))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement{:?}", self.word)
    }
}

/// `R+(w) = { beta in R+ : w^{-1}(beta) < 0 }`, in root order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionSet {
    pub roots: Vec<Root>,
}

impl InversionSet {
    pub fn contains(&self, beta: &Root) -> bool {
        self.roots.contains(beta)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// The sequence `beta_1, ..., beta_N` attached to a reduced expression of
/// `w0 = s_1 ... s_N` whose first `n` letters spell `w^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSequence {
    pub betas: Vec<Root>,
    pub split: usize,
    /// The reduced word of `w0` used.
    pub w0_word: Vec<usize>,
}

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn identity_matrix(n: usize) -> Vec<i64> {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn column_negative(n: usize, m: &[i64], j: usize) -> bool {
    (0..n).any(|i| m[i * n + j] < 0)
}

impl RootSystem {
    /// Matrix of `s_i` (1-based) on simple-root coordinates:
    /// `s_i(alpha_j) = alpha_j - a_ij alpha_i`.
    fn simple_matrix(&self, i: usize) -> Vec<i64> {
        let n = self.rank();
        let a = &self.cartan().matrix;
        let mut m = identity_matrix(n);
        for j in 0..n {
            m[(i - 1) * n + j] -= a[i - 1][j];
        }
        m
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement { system: self.id(), rank: self.rank(), matrix: identity_matrix(self.rank()), word: vec![] }
    }

    /// Canonical element for an arbitrary (possibly non-reduced) word.
    pub fn element_from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let n = self.rank();
        let mut m = identity_matrix(n);
        for &i in word {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, rank: n });
            }
            m = mat_mul(n, &m, &self.simple_matrix(i));
        }
        Ok(self.canonicalize(m))
    }

    fn canonicalize(&self, matrix: Vec<i64>) -> WeylElement {
        let n = self.rank();
        let id = identity_matrix(n);
        // Any reduced word, peeling right descents: w(alpha_i) < 0.
        let mut m = matrix.clone();
        let mut peeled = Vec::new();
        while m != id {
            let i = (0..n).find(|&j| column_negative(n, &m, j)).expect("non-identity element has a descent") + 1;
            m = mat_mul(n, &m, &self.simple_matrix(i));
            peeled.push(i);
        }
        // w = s_{r_k} ... s_{r_1}, so w^{-1} = s_{r_1} ... s_{r_k}.
        let mut inv = id.clone();
        for &i in &peeled {
            inv = mat_mul(n, &inv, &self.simple_matrix(i));
        }
        // Greedy smallest left descent gives the ShortLex-minimal reduced word.
        let mut word = Vec::with_capacity(peeled.len());
        for _ in 0..peeled.len() {
            let i = (0..n).find(|&j| column_negative(n, &inv, j)).expect("left descent exists") + 1;
            word.push(i);
            inv = mat_mul(n, &inv, &self.simple_matrix(i));
        }
        WeylElement { system: self.id(), rank: n, matrix, word }
    }

    fn check_same(&self, w: &WeylElement) -> Result<()> {
        if w.system != self.id() {
            return Err(Error::MixedRootSystems);
        }
        Ok(())
    }

    pub fn multiply(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
        self.check_same(a)?;
        self.check_same(b)?;
        Ok(self.canonicalize(mat_mul(self.rank(), &a.matrix, &b.matrix)))
    }

    pub fn inverse(&self, w: &WeylElement) -> Result<WeylElement> {
        self.check_same(w)?;
        let reversed: Vec<usize> = w.word.iter().rev().copied().collect();
        self.element_from_word(&reversed)
    }

    pub fn longest_element(&self) -> WeylElement {
        let n = self.rank();
        let mut m = identity_matrix(n);
        // Extend on the right while some w(alpha_i) stays positive.
        while let Some(i) = (0..n).find(|&j| !column_negative(n, &m, j)) {
            m = mat_mul(n, &m, &self.simple_matrix(i + 1));
        }
        self.canonicalize(m)
    }

    pub fn apply_root(&self, w: &WeylElement, beta: &Root) -> Result<Root> {
        self.check_same(w)?;
        let n = self.rank();
        Ok(Root::new((0..n).map(|i| (0..n).map(|j| w.matrix[i * n + j] * beta.coords[j]).sum()).collect()))
    }

    /// Linear action on fundamental-weight coordinates, letter by letter:
    /// `s_i(lambda) = lambda - <lambda, alpha_i^vee> alpha_i`.
    pub fn apply_weight(&self, w: &WeylElement, lam: &Weight) -> Result<Weight> {
        self.check_same(w)?;
        let a = &self.cartan().matrix;
        let mut out = lam.clone();
        for &i in w.word.iter().rev() {
            let p = out.coords[i - 1].clone();
            for (k, c) in out.coords.iter_mut().enumerate() {
                let a_ki = a[k][i - 1];
                if a_ki != 0 {
                    *c -= &p * num_bigint::BigInt::from(a_ki);
                }
            }
        }
        Ok(out)
    }

    /// `w . lambda = w(lambda + rho) - rho`.
    pub fn dot_action(&self, w: &WeylElement, lam: &Weight) -> Result<Weight> {
        let shifted = lam + self.rho();
        Ok(&self.apply_weight(w, &shifted)? - self.rho())
    }

    /// `s_beta . mu = mu - <mu + rho, beta^vee> beta`.
    pub fn reflect_dot(&self, beta: &Root, mu: &Weight) -> Result<Weight> {
        let p = self.pairing(&(mu + self.rho()), beta)?;
        Ok(mu - &self.root_to_weight(&beta.coords).scale(&p))
    }

    pub fn inversion_set(&self, w: &WeylElement) -> Result<InversionSet> {
        let inv = self.inverse(w)?;
        let mut roots = Vec::new();
        for beta in self.positive_roots() {
            if self.apply_root(&inv, beta)?.is_negative() {
                roots.push(beta.clone());
            }
        }
        Ok(InversionSet { roots })
    }

    /// Is `s_i` (1-based) a left descent of `w`, i.e. `l(s_i w) < l(w)`?
    pub fn is_left_descent(&self, w: &WeylElement, i: usize) -> Result<bool> {
        let inv = self.inverse(w)?;
        let descent = inv.column(i - 1).any(|c| c < 0);
        Ok(descent)
    }

    /// Is `s_i` (1-based) a right descent of `w`, i.e. `l(w s_i) < l(w)`?
    pub fn is_right_descent(&self, w: &WeylElement, i: usize) -> Result<bool> {
        self.check_same(w)?;
        Ok(w.column(i - 1).any(|c| c < 0))
    }
}

/// An enumerated Weyl group with cached multiplication tables and a lazily
/// computed Bruhat order.
pub struct WeylGroup {
    rs: Arc<RootSystem>,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    /// `left[i-1][x]` is the index of `s_i x`.
    left: Vec<Vec<usize>>,
    longest: usize,
    bruhat: OnceLock<Vec<bool>>,
}

impl fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylGroup").field("label", &self.rs.label()).field("order", &self.elements.len()).finish()
    }
}

impl WeylGroup {
    pub fn new(rs: Arc<RootSystem>) -> Result<Self> {
        Self::with_bound(rs, DEFAULT_GROUP_BOUND)
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Self::new(Arc::new(RootSystem::from_label(label)?))
    }

    pub fn with_bound(rs: Arc<RootSystem>, bound: usize) -> Result<Self> {
        let n = rs.rank();
        let simple: Vec<Vec<i64>> = (1..=n).map(|i| rs.simple_matrix(i)).collect();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        let id = identity_matrix(n);
        seen.insert(id.clone());
        queue.push_back(id);
        let mut matrices = Vec::new();
        while let Some(m) = queue.pop_front() {
            for s in &simple {
                let next = mat_mul(n, s, &m);
                if seen.insert(next.clone()) {
                    if seen.len() > bound {
                        return Err(Error::GroupTooLarge { bound });
                    }
                    queue.push_back(next);
                }
            }
            matrices.push(m);
        }
        let mut elements: Vec<WeylElement> = matrices.into_iter().map(|m| rs.canonicalize(m)).collect();
        elements.sort();
        let index: HashMap<Vec<i64>, usize> =
            elements.iter().enumerate().map(|(k, w)| (w.matrix.clone(), k)).collect();
        let left = simple
            .iter()
            .map(|s| elements.iter().map(|w| index[&mat_mul(n, s, &w.matrix)]).collect())
            .collect();
        let longest = elements.len() - 1;
        debug_assert_eq!(elements[longest].length(), rs.positive_roots().len());
        Ok(WeylGroup { rs, elements, index, left, longest, bruhat: OnceLock::new() })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// All elements ordered by length, then ShortLex word.
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, k: usize) -> &WeylElement {
        &self.elements[k]
    }

    pub fn identity(&self) -> &WeylElement {
        &self.elements[0]
    }

    pub fn longest(&self) -> &WeylElement {
        &self.elements[self.longest]
    }

    pub fn index_of(&self, w: &WeylElement) -> Result<usize> {
        if w.system != self.rs.id() {
            return Err(Error::MixedRootSystems);
        }
        Ok(self.index[&w.matrix])
    }

    pub fn multiply(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
        self.rs.multiply(a, b)
    }

    pub fn inverse(&self, w: &WeylElement) -> Result<WeylElement> {
        self.rs.inverse(w)
    }

    fn bruhat_table(&self) -> &[bool] {
        self.bruhat.get_or_init(|| {
            let size = self.elements.len();
            let mut table = vec![false; size * size];
            table[0] = true;
            for y in 1..size {
                // s = first letter of the canonical word, a left descent of y
                let s = self.elements[y].word[0];
                let sy = self.left[s - 1][y];
                for x in 0..size {
                    let sx = self.left[s - 1][x];
                    let le = if self.elements[sx].length() < self.elements[x].length() {
                        table[sy * size + sx]
                    } else {
                        table[sy * size + x]
                    };
                    table[y * size + x] = le;
                }
            }
            table
        })
    }

    /// Bruhat order via the lifting property: for a left descent `s` of `y`,
    /// `x <= y` iff `sx <= sy` (when `sx < x`) or `x <= sy` (otherwise).
    pub fn bruhat_leq(&self, x: &WeylElement, y: &WeylElement) -> Result<bool> {
        let xi = self.index_of(x)?;
        let yi = self.index_of(y)?;
        Ok(self.bruhat_leq_idx(xi, yi))
    }

    pub fn bruhat_leq_idx(&self, x: usize, y: usize) -> bool {
        self.bruhat_table()[y * self.elements.len() + x]
    }

    /// Covering relations `(x, y)` with `x < y` and `l(y) = l(x) + 1`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let size = self.elements.len();
        let mut edges = Vec::new();
        for y in 0..size {
            for x in 0..size {
                if self.elements[x].length() + 1 == self.elements[y].length() && self.bruhat_leq_idx(x, y) {
                    edges.push((x, y));
                }
            }
        }
        edges
    }

    pub fn inversion_set(&self, w: &WeylElement) -> Result<InversionSet> {
        self.rs.inversion_set(w)
    }

    /// Reduced expression `w0 = s_1 ... s_N` with `s_1 ... s_n = w^{-1}`,
    /// built as (word of `w^{-1}`) followed by (word of `w w0`), together
    /// with `beta_j = -w s_1 ... s_{j-1}(alpha_{i_j})` for `j <= n` and
    /// `+w s_1 ... s_{j-1}(alpha_{i_j})` for `j > n`.
    pub fn root_sequence_through(&self, w: &WeylElement) -> Result<RootSequence> {
        let rs = &self.rs;
        let inv = rs.inverse(w)?;
        let tail = rs.multiply(w, self.longest())?;
        let n = w.length();
        let w0_word: Vec<usize> = inv.word.iter().chain(tail.word.iter()).copied().collect();
        if w0_word.len() != rs.positive_roots().len() {
            return Err(Error::Internal("concatenated word has the wrong length".into()));
        }
        let mut prefix = w.clone();
        let mut betas = Vec::with_capacity(w0_word.len());
        for (j, &i) in w0_word.iter().enumerate() {
            let image = rs.apply_root(&prefix, &rs.simple_root(i - 1))?;
            betas.push(if j < n { -&image } else { image });
            prefix = rs.multiply(&prefix, &rs.element_from_word(&[i])?)?;
        }
        if prefix != tail {
            return Err(Error::Internal("prefix product mismatch".into()));
        }
        let as_set: HashSet<&Root> = betas.iter().collect();
        let positive: HashSet<&Root> = rs.positive_roots().iter().collect();
        if as_set != positive || betas.len() != positive.len() {
            return Err(Error::Internal(format!("beta sequence {betas:?} is not R+")));
        }
        let head: HashSet<&Root> = betas[..n].iter().collect();
        let inversions = rs.inversion_set(w)?;
        if head != inversions.roots.iter().collect::<HashSet<_>>() {
            return Err(Error::Internal("beta prefix differs from R+(w)".into()));
        }
        Ok(RootSequence { betas, split: n, w0_word })
    }

    /// Display name: `e`, `w0` (rank >= 2), letters `s`, `t` in rank <= 2,
    /// comma-separated indices otherwise.
    pub fn name(&self, w: &WeylElement) -> String {
        if w.is_identity() {
            return "e".into();
        }
        if self.rank() >= 2 && w == self.longest() {
            return "w0".into();
        }
        word_name(self.rank(), &w.word)
    }

    pub fn parse(&self, text: &str) -> Result<WeylElement> {
        let word = parse_word(self.rank(), text)?;
        match word {
            ParsedWord::Longest => Ok(self.longest().clone()),
            ParsedWord::Letters(letters) => self.rs.element_from_word(&letters),
        }
    }
}

const LETTERS: [char; 4] = ['s', 't', 'u', 'v'];

/// Word rendering without the `e`/`w0` shortcuts.
pub fn word_name(rank: usize, word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    if rank <= 2 {
        word.iter().map(|&i| LETTERS[i - 1]).collect()
    } else {
        word.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

enum ParsedWord {
    Longest,
    Letters(Vec<usize>),
}

fn parse_word(rank: usize, text: &str) -> Result<ParsedWord> {
    let bad = || Error::BadWord(text.to_string());
    let t = text.trim();
    match t {
        "" | "e" => return Ok(ParsedWord::Letters(vec![])),
        "w0" => return Ok(ParsedWord::Longest),
        _ => {}
    }
    let letters = if t.contains(',') || t.chars().all(|c| c.is_ascii_digit()) {
        if t.contains(',') {
            t.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?
        } else if rank < 10 {
            t.chars().map(|c| c.to_digit(10).unwrap() as usize).collect()
        } else {
            return Err(bad());
        }
    } else {
        t.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| LETTERS.iter().position(|&l| l == c).map(|p| p + 1).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?
    };
    if let Some(&i) = letters.iter().find(|&&i| i == 0 || i > rank) {
        return Err(Error::IndexOutOfRange { index: i, rank });
    }
    Ok(ParsedWord::Letters(letters))
}

//! Exponential sums g(z) = sum_j e^{a_j . z + b_j}: construction and
//! validation, minimal spacing, affine-substitution transforms, restriction
//! to a line, and (scaled) evaluation.
//!
//! Coefficients are kept as exponents b_j, never as e^{b_j}, so magnitude
//! comparisons happen in log space and stay overflow-free.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{Error, Result};

/// exp(x) overflows f64 just above this exponent.
pub const OVERFLOW_GUARD: f64 = 709.0;

/// Relative tolerance under which two frequency vectors count as colliding.
pub fn collision_tolerance(max_freq_norm: f64) -> f64 {
    1e-9 * (1.0 + max_freq_norm)
}

/// One term e^{a . z + b}: frequency vector `a`, coefficient exponent
/// b = b_re + i b_im.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub a: Vec<f64>,
    pub b_re: f64,
    pub b_im: f64,
}

impl Term {
    pub fn new(a: Vec<f64>, b_re: f64, b_im: f64) -> Self {
        Term { a, b_re, b_im }
    }

    /// Real term with coefficient exponent 0, i.e. plain e^{a . z}.
    pub fn unit(a: Vec<f64>) -> Self {
        Term::new(a, 0.0, 0.0)
    }

    pub fn b(&self) -> Complex64 {
        Complex64::new(self.b_re, self.b_im)
    }
}

/// An n-variate exponential t-sum. Terms are immutable after construction;
/// construction rejects t < 2, dimension mismatches, non-finite entries and
/// frequency collisions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExpSum")]
pub struct ExpSum {
    n: usize,
    terms: Vec<Term>,
}

#[derive(Deserialize)]
struct RawExpSum {
    n: usize,
    terms: Vec<Term>,
}

impl TryFrom<RawExpSum> for ExpSum {
    type Error = Error;
    fn try_from(raw: RawExpSum) -> Result<ExpSum> {
        ExpSum::new(raw.n, raw.terms)
    }
}

impl ExpSum {
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension n must be positive".into()));
        }
        if terms.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 terms, got {}",
                terms.len()
            )));
        }
        for (j, term) in terms.iter().enumerate() {
            if term.a.len() != n {
                return Err(Error::InvalidInput(format!(
                    "term {j}: frequency has length {}, expected {n}",
                    term.a.len()
                )));
            }
            if !term.a.iter().all(|x| x.is_finite())
                || !term.b_re.is_finite()
                || !term.b_im.is_finite()
            {
                return Err(Error::NonFinite("ExpSum term"));
            }
        }
        let tol = collision_tolerance(max_freq_norm(&terms));
        for p in 0..terms.len() {
            for q in p + 1..terms.len() {
                let dist = linalg::norm(&linalg::sub(&terms[p].a, &terms[q].a));
                if dist < tol {
                    return Err(Error::DuplicateFrequencies { p, q, dist, tol });
                }
            }
        }
        Ok(ExpSum { n, terms })
    }

    /// Univariate constructor from (a, b_re, b_im) triples.
    pub fn univariate(terms: &[(f64, f64, f64)]) -> Result<Self> {
        ExpSum::new(
            1,
            terms
                .iter()
                .map(|&(a, re, im)| Term::new(vec![a], re, im))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of terms t.
    pub fn t(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, j: usize) -> &Term {
        &self.terms[j]
    }

    pub fn freq(&self, j: usize) -> &[f64] {
        &self.terms[j].a
    }

    /// Scalar frequency of term j; meaningful for univariate sums.
    pub fn freq1(&self, j: usize) -> f64 {
        self.terms[j].a[0]
    }

    /// beta_j = Re(b_j).
    pub fn beta(&self, j: usize) -> f64 {
        self.terms[j].b_re
    }

    pub fn b(&self, j: usize) -> Complex64 {
        self.terms[j].b()
    }

    /// Term indices ordered by ascending frequency (univariate).
    pub fn sorted_by_freq(&self) -> Result<Vec<usize>> {
        if self.n != 1 {
            return Err(Error::NotUnivariate("sorted_by_freq"));
        }
        let mut idx: Vec<usize> = (0..self.t()).collect();
        idx.sort_by(|&p, &q| self.freq1(p).total_cmp(&self.freq1(q)));
        Ok(idx)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("ExpSum serializes");
        s.push('\n');
        s
    }
}

fn max_freq_norm(terms: &[Term]) -> f64 {
    terms
        .iter()
        .map(|t| linalg::norm(&t.a))
        .fold(0.0, f64::max)
}

/// Minimal pairwise frequency spacing delta(g), plus the univariate prefix
/// spacings delta_ell over the first ell frequencies in sorted order.
#[derive(Debug, Clone, Serialize)]
pub struct Spacing {
    pub delta: f64,
    prefix: Option<Vec<f64>>,
}

impl Spacing {
    /// delta_ell, the minimal spacing among the ell smallest frequencies;
    /// ell ranges over 2..=t. Univariate sums only.
    pub fn delta_prefix(&self, ell: usize) -> Option<f64> {
        let prefix = self.prefix.as_ref()?;
        if ell < 2 || ell > prefix.len() + 1 {
            return None;
        }
        Some(prefix[ell - 2])
    }
}

/// delta(g) = min_{p != q} |a_p - a_q| in the L2 norm. Rejects sums whose
/// spacing sits below the collision tolerance.
pub fn minimal_spacing(g: &ExpSum) -> Result<Spacing> {
    let tol = collision_tolerance(max_freq_norm(g.terms()));
    let mut delta = f64::INFINITY;
    let mut argpair = (0, 0);
    for p in 0..g.t() {
        for q in p + 1..g.t() {
            let dist = linalg::norm(&linalg::sub(g.freq(p), g.freq(q)));
            if dist < delta {
                delta = dist;
                argpair = (p, q);
            }
        }
    }
    if delta < tol {
        return Err(Error::DuplicateFrequencies {
            p: argpair.0,
            q: argpair.1,
            dist: delta,
            tol,
        });
    }
    let prefix = if g.n() == 1 {
        let order = g.sorted_by_freq()?;
        let freqs: Vec<f64> = order.iter().map(|&j| g.freq1(j)).collect();
        let mut running = f64::INFINITY;
        let mut out = Vec::with_capacity(freqs.len() - 1);
        for ell in 2..=freqs.len() {
            running = running.min(freqs[ell - 1] - freqs[ell - 2]);
            out.push(running);
        }
        Some(out)
    } else {
        None
    };
    Ok(Spacing { delta, prefix })
}

/// Dimension of the smallest affine subspace containing the frequencies:
/// the rank of the differences a_j - a_1.
pub fn affine_dimension(g: &ExpSum) -> usize {
    let rows: Vec<Vec<f64>> = (1..g.t())
        .map(|j| linalg::sub(g.freq(j), g.freq(0)))
        .collect();
    linalg::rank(&rows)
}

/// g2(z) = alpha e^{a . z} g(Mz + beta): frequencies become M^T a_j + a and
/// coefficient exponents gain a_j . beta + Log alpha. `m = None` means the
/// identity substitution.
pub fn transform(
    g: &ExpSum,
    alpha: Complex64,
    a: &[f64],
    beta: &[Complex64],
    m: Option<&[Vec<f64>]>,
) -> Result<ExpSum> {
    let n = g.n();
    if a.len() != n || beta.len() != n {
        return Err(Error::InvalidInput(format!(
            "transform: shift vectors must have length {n}"
        )));
    }
    if alpha == Complex64::new(0.0, 0.0) || !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::InvalidInput("transform: alpha must be finite and nonzero".into()));
    }
    if let Some(mat) = m {
        if mat.len() != n || mat.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(format!("transform: M must be {n}x{n}")));
        }
        let scale = mat
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |s, &x| s.max(x.abs()));
        if linalg::det(mat).abs() <= 1e-9 * (1.0 + scale).powi(n as i32) {
            return Err(Error::SingularMatrix("transform"));
        }
    }
    let log_alpha = alpha.ln();
    let terms = g
        .terms()
        .iter()
        .map(|term| {
            let freq = match m {
                Some(mat) => linalg::matvec_t(mat, &term.a),
                None => term.a.clone(),
            };
            let freq: Vec<f64> = freq.iter().zip(a).map(|(x, y)| x + y).collect();
            let shift: Complex64 = term.a.iter().zip(beta).map(|(&ak, bk)| ak * bk).sum();
            let b = term.b() + shift + log_alpha;
            Term::new(freq, b.re, b.im)
        })
        .collect();
    ExpSum::new(n, terms)
}

/// Restrict g to the line s -> s theta + w_perp, where w_perp is the part of
/// w orthogonal to the unit vector theta. Projected frequencies that collide
/// are merged by adding coefficients e^{b}; terms merging to zero are
/// dropped. The identity g~(s) = g(s theta + w_perp) holds for the result.
pub fn slice_to_line(g: &ExpSum, w: &[f64], theta: &[f64]) -> Result<ExpSum> {
    let n = g.n();
    if w.len() != n || theta.len() != n {
        return Err(Error::InvalidInput(format!(
            "slice_to_line: w and theta must have length {n}"
        )));
    }
    let tn = linalg::norm(theta);
    if (tn - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "slice_to_line: |theta| = {tn:.12}, expected a unit vector"
        )));
    }
    let wdott = linalg::dot(w, theta);
    let wperp = linalg::add_scaled(w, theta, -wdott);

    let mut projected: Vec<(f64, Complex64)> = g
        .terms()
        .iter()
        .map(|term| {
            let s = linalg::dot(&term.a, theta);
            let b = term.b() + linalg::dot(&term.a, &wperp);
            (s, b)
        })
        .collect();
    projected.sort_by(|x, y| x.0.total_cmp(&y.0));

    let max_abs = projected.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let tol = collision_tolerance(max_abs);

    let mut merged: Vec<Term> = Vec::new();
    let mut k = 0;
    while k < projected.len() {
        let mut group = vec![projected[k]];
        while k + 1 < projected.len() && projected[k + 1].0 - group[0].0 < tol {
            k += 1;
            group.push(projected[k]);
        }
        k += 1;
        let freq = group.iter().map(|p| p.0).sum::<f64>() / group.len() as f64;
        // log-sum-exp merge of coefficients
        let mre = group.iter().map(|p| p.1.re).fold(f64::NEG_INFINITY, f64::max);
        let s: Complex64 = group.iter().map(|p| (p.1 - mre).exp()).sum();
        if s.norm() < 1e-12 {
            continue;
        }
        let b = s.ln() + mre;
        merged.push(Term::new(vec![freq], b.re, b.im));
    }
    if merged.len() < 2 {
        return Err(Error::DegenerateSlice);
    }
    ExpSum::new(1, merged)
}

/// Direct evaluation sum_j exp(a_j . z + b_j). Errors when any exponent's
/// real part exceeds the overflow guard.
pub fn evaluate(g: &ExpSum, z: &[Complex64]) -> Result<Complex64> {
    Ok(evaluate_with_gradient(g, z)?.0)
}

/// Value and gradient (d/dz_k) in one pass.
pub fn evaluate_with_gradient(g: &ExpSum, z: &[Complex64]) -> Result<(Complex64, Vec<Complex64>)> {
    let n = g.n();
    if z.len() != n {
        return Err(Error::InvalidInput(format!("evaluate: z must have length {n}")));
    }
    if !z.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::NonFinite("evaluate argument"));
    }
    let mut value = Complex64::default();
    let mut grad = vec![Complex64::default(); n];
    for term in g.terms() {
        let e = exponent(term, z);
        if e.re > OVERFLOW_GUARD {
            return Err(Error::EvaluationOverflow(e.re));
        }
        let v = e.exp();
        value += v;
        for k in 0..n {
            grad[k] += term.a[k] * v;
        }
    }
    Ok((value, grad))
}

/// Overflow-free evaluation: returns (m, S) with g(z) = e^m S, where m is
/// the largest exponent real part, so |S| <= t always.
pub fn evaluate_scaled(g: &ExpSum, z: &[Complex64]) -> (f64, Complex64) {
    let exps: Vec<Complex64> = g.terms().iter().map(|t| exponent(t, z)).collect();
    let m = exps.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max);
    let s = exps.iter().map(|e| (e - m).exp()).sum();
    (m, s)
}

/// g'(z)/g(z) for univariate g, with the dominant term factored out of both
/// numerator and denominator. Only meaningful away from roots.
pub fn log_derivative_1d(g: &ExpSum, z: Complex64) -> Complex64 {
    let mut m = f64::NEG_INFINITY;
    for term in g.terms() {
        m = m.max(term.a[0] * z.re + term.b_re);
    }
    let mut num = Complex64::default();
    let mut den = Complex64::default();
    for term in g.terms() {
        let e = term.a[0] * z + term.b();
        let v = (e - m).exp();
        num += term.a[0] * v;
        den += v;
    }
    num / den
}

fn exponent(term: &Term, z: &[Complex64]) -> Complex64 {
    let mut e = term.b();
    for (ak, zk) in term.a.iter().zip(z) {
        e += ak * zk;
    }
    e
}

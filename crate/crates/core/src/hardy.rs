//! Discrete two-weight Hardy inequalities
//! `Σ_k |Σ_{j≤k} a_j|² u_k ≤ C · B · Σ_j |a_j|² v_j` and the mirrored tail-sum form.

use rand::Rng;

use crate::error::{Error, Result};

/// Finite weights `u, v ≥ 0` and data `a`, all of one length. `v_k = 0` means `v_k^{-1} = 0`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HardyInstance {
    u: Vec<f64>,
    v: Vec<f64>,
    a: Vec<f64>,
}

/// Both sides of the inequality.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct HardySides {
    pub lhs: f64,
    /// The characterizing supremum.
    pub b: f64,
    /// `Σ_j |a_j|² v_j`
    pub rhs_weighted: f64,
}

impl HardySides {
    /// `lhs / (B · rhs)`, `None` when the product vanishes.
    pub fn ratio(&self) -> Option<f64> {
        let d = self.b * self.rhs_weighted;
        (d > 0.0).then(|| self.lhs / d)
    }

    /// `lhs ≤ c · B · rhs`, with a rounding allowance.
    pub fn holds_with(&self, c: f64) -> bool {
        self.lhs <= c * self.b * self.rhs_weighted * (1.0 + 1e-12) + f64::MIN_POSITIVE
    }
}

impl HardyInstance {
    pub fn new(u: Vec<f64>, v: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() || u.len() != a.len() {
            return Err(Error::InvalidArgument(format!("lengths differ: u {}, v {}, a {}", u.len(), v.len(), a.len())));
        }
        if let Some(w) = u.iter().chain(&v).find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!("weights must be finite and nonnegative, got {w}")));
        }
        if let Some(x) = a.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite data value {x}")));
        }
        Ok(HardyInstance { u, v, a })
    }

    /// Random instance of length `len`: log-uniform weights over six decades with about
    /// a fifth of the entries zeroed, data uniform in `[-1, 1]` and vanishing where `v` does.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let weight = |rng: &mut R| if rng.random_bool(0.2) { 0.0 } else { 10f64.powf(rng.random_range(-3.0..3.0)) };
        let u: Vec<f64> = (0..len).map(|_| weight(rng)).collect();
        let v: Vec<f64> = (0..len).map(|_| weight(rng)).collect();
        let a = v.iter().map(|vk| if *vk == 0.0 { 0.0 } else { rng.random_range(-1.0..1.0) }).collect();
        HardyInstance { u, v, a }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// All three sequences index-reversed.
    pub fn reversed(&self) -> Self {
        let rev = |s: &[f64]| s.iter().rev().copied().collect();
        HardyInstance { u: rev(&self.u), v: rev(&self.v), a: rev(&self.a) }
    }

    /// `a` scaled by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        HardyInstance { u: self.u.clone(), v: self.v.clone(), a: self.a.iter().map(|x| t * x).collect() }
    }
}

fn inv(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        1.0 / v
    }
}

/// Both forms walk the instance in some index order `at(0), at(1), ...`; the head sums run
/// along that order and the tail sums against it.
fn sides(inst: &HardyInstance, at: impl Fn(usize) -> usize) -> HardySides {
    let n = inst.len();
    let mut lhs = 0.0;
    let mut partial = 0.0;
    for i in 0..n {
        let k = at(i);
        partial += inst.a[k];
        lhs += partial * partial * inst.u[k];
    }
    // tail sums of u from position i to the end
    let mut tail_u = vec![0.0; n + 1];
    for i in (0..n).rev() {
        tail_u[i] = tail_u[i + 1] + inst.u[at(i)];
    }
    let mut head_v = 0.0;
    let mut b = 0.0f64;
    for (i, tu) in tail_u.iter().take(n).enumerate() {
        head_v += inv(inst.v[at(i)]);
        b = b.max(tu * head_v);
    }
    let mut rhs = 0.0;
    for i in 0..n {
        let k = at(i);
        rhs += inst.a[k] * inst.a[k] * inst.v[k];
    }
    HardySides { lhs, b, rhs_weighted: rhs }
}

/// Head-sum form: `lhs = Σ_k |Σ_{j≤k} a_j|² u_k`, `B = max_N (Σ_{k≥N} u_k)(Σ_{k≤N} v_k^{-1})`.
pub fn hardy_a(inst: &HardyInstance) -> HardySides {
    sides(inst, |i| i)
}

/// Tail-sum form: `lhs = Σ_k |Σ_{j≥k} a_j|² u_k`, `B = max_N (Σ_{k≤N} u_k)(Σ_{k≥N} v_k^{-1})`.
pub fn hardy_b(inst: &HardyInstance) -> HardySides {
    let n = inst.len();
    sides(inst, |i| n - 1 - i)
}

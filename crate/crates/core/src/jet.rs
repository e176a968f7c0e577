//! Forward-mode automatic differentiation on truncated multivariate Taylor
//! expansions in the four Boyer-Lindquist coordinates.
//!
//! A [`Jet`] stores the Taylor coefficients `c_alpha = D^alpha f / alpha!` of a
//! scalar function at a point, for all multi-indices `alpha` with
//! `|alpha| <= order`. Arithmetic propagates the coefficients exactly, so
//! every derivative extracted from a jet is correct to rounding. No finite
//! differences appear anywhere in the derivative path.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Number of coordinate variables (t, r, theta, phi).
pub const NVARS: usize = 4;

/// Highest supported truncation order. Fourth order is what the Carter
/// commutator needs; cost grows combinatorially beyond that.
pub const MAX_ORDER: usize = 4;

/// Number of multi-indices with |alpha| <= MAX_ORDER in NVARS variables.
pub const NCOEFF: usize = 70;

/// Coefficient slots are sorted by total degree; slot ranges per degree.
const DEG_OFFSET: [usize; MAX_ORDER + 2] = [0, 1, 5, 15, 35, 70];

/// Exponent tuples in graded lexicographic order.
const EXPONENTS: [[u8; NVARS]; NCOEFF] = build_exponents();

/// Total degree of each slot.
const DEGREE: [u8; NCOEFF] = build_degrees();

/// Lookup from exponent tuple to slot; 255 marks |alpha| > MAX_ORDER.
const SLOT: [[[[u8; 5]; 5]; 5]; 5] = build_slots();

const fn build_exponents() -> [[u8; NVARS]; NCOEFF] {
    let mut out = [[0u8; NVARS]; NCOEFF];
    let mut slot = 0usize;
    let mut deg = 0usize;
    while deg <= MAX_ORDER {
        // lexicographic within fixed total degree, first variable fastest-descending
        let mut i = deg as i32;
        while i >= 0 {
            let mut j = deg as i32 - i;
            while j >= 0 {
                let mut k = deg as i32 - i - j;
                while k >= 0 {
                    let l = deg as i32 - i - j - k;
                    out[slot] = [i as u8, j as u8, k as u8, l as u8];
                    slot += 1;
                    k -= 1;
                }
                j -= 1;
            }
            i -= 1;
        }
        deg += 1;
    }
    out
}

const fn build_degrees() -> [u8; NCOEFF] {
    let mut out = [0u8; NCOEFF];
    let mut s = 0;
    while s < NCOEFF {
        let e = EXPONENTS[s];
        out[s] = e[0] + e[1] + e[2] + e[3];
        s += 1;
    }
    out
}

const fn build_slots() -> [[[[u8; 5]; 5]; 5]; 5] {
    let mut out = [[[[255u8; 5]; 5]; 5]; 5];
    let mut s = 0;
    while s < NCOEFF {
        let e = EXPONENTS[s];
        out[e[0] as usize][e[1] as usize][e[2] as usize][e[3] as usize] = s as u8;
        s += 1;
    }
    out
}

/// Truncated Taylor expansion of a scalar field at a point.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    order: usize,
    c: [f64; NCOEFF],
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        assert!(order <= MAX_ORDER);
        let mut c = [0.0; NCOEFF];
        c[0] = value;
        Jet { order, c }
    }

    /// Seed jet for coordinate variable `var` at `value`.
    pub fn variable(value: f64, var: usize, order: usize) -> Self {
        assert!(var < NVARS && order <= MAX_ORDER);
        let mut c = [0.0; NCOEFF];
        c[0] = value;
        if order >= 1 {
            c[1 + var] = 1.0;
        }
        Jet { order, c }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    fn ncoeff(&self) -> usize {
        DEG_OFFSET[self.order + 1]
    }

    /// Taylor coefficient for the multi-index `alpha` (i.e. D^alpha f / alpha!).
    pub fn coeff(&self, alpha: [usize; NVARS]) -> f64 {
        let s = SLOT[alpha[0]][alpha[1]][alpha[2]][alpha[3]];
        assert!(s != 255, "multi-index beyond MAX_ORDER");
        self.c[s as usize]
    }

    /// First partial derivative d/dx_var as a jet of one order less.
    pub fn partial(&self, var: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let mut out = Jet::constant(0.0, self.order - 1);
        for s in 0..out.ncoeff() {
            let mut e = EXPONENTS[s];
            e[var] += 1;
            let src = SLOT[e[0] as usize][e[1] as usize][e[2] as usize][e[3] as usize];
            out.c[s] = self.c[src as usize] * e[var] as f64;
        }
        out
    }

    /// Truncate to a lower order.
    pub fn truncated(&self, order: usize) -> Jet {
        assert!(order <= self.order);
        let mut out = *self;
        out.order = order;
        for s in DEG_OFFSET[order + 1]..NCOEFF {
            out.c[s] = 0.0;
        }
        out
    }

    /// Composition with a univariate function given its scaled derivatives
    /// at the jet's value: derivs[k] = f^(k)(c0) / k!.
    fn compose(&self, derivs: &[f64]) -> Jet {
        let mut w = *self;
        w.c[0] = 0.0;
        let mut res = Jet::constant(derivs[self.order], self.order);
        for k in (0..self.order).rev() {
            res = res * w;
            res.c[0] += derivs[k];
        }
        res
    }

    pub fn recip(&self) -> Jet {
        let c0 = self.c[0];
        assert!(c0 != 0.0, "jet reciprocal at zero");
        let mut d = [0.0; MAX_ORDER + 1];
        let mut p = 1.0 / c0;
        for (k, dk) in d.iter_mut().take(self.order + 1).enumerate() {
            *dk = if k % 2 == 0 { p } else { -p };
            p /= c0;
        }
        self.compose(&d)
    }

    pub fn sqrt(&self) -> Jet {
        let c0 = self.c[0];
        assert!(c0 > 0.0, "jet sqrt of non-positive value");
        let s = c0.sqrt();
        // binom(1/2, k) * c0^(1/2 - k)
        let mut d = [0.0; MAX_ORDER + 1];
        let mut coef = 1.0;
        for (k, dk) in d.iter_mut().take(self.order + 1).enumerate() {
            if k > 0 {
                coef *= (0.5 - (k as f64 - 1.0)) / k as f64;
            }
            *dk = coef * s / c0.powi(k as i32);
        }
        self.compose(&d)
    }

    pub fn exp(&self) -> Jet {
        let e = self.c[0].exp();
        let mut d = [0.0; MAX_ORDER + 1];
        let mut f = 1.0;
        for (k, dk) in d.iter_mut().take(self.order + 1).enumerate() {
            if k > 0 {
                f /= k as f64;
            }
            *dk = e * f;
        }
        self.compose(&d)
    }

    pub fn ln(&self) -> Jet {
        let c0 = self.c[0];
        assert!(c0 > 0.0, "jet ln of non-positive value");
        let mut d = [0.0; MAX_ORDER + 1];
        d[0] = c0.ln();
        let mut p = 1.0 / c0;
        for k in 1..=self.order {
            d[k] = if k % 2 == 1 { p } else { -p } / k as f64;
            p /= c0;
        }
        self.compose(&d)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        let cycle = [s, c, -s, -c];
        let mut d = [0.0; MAX_ORDER + 1];
        let mut f = 1.0;
        for (k, dk) in d.iter_mut().take(self.order + 1).enumerate() {
            if k > 0 {
                f /= k as f64;
            }
            *dk = cycle[k % 4] * f;
        }
        self.compose(&d)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        let cycle = [c, -s, -c, s];
        let mut d = [0.0; MAX_ORDER + 1];
        let mut f = 1.0;
        for (k, dk) in d.iter_mut().take(self.order + 1).enumerate() {
            if k > 0 {
                f /= k as f64;
            }
            *dk = cycle[k % 4] * f;
        }
        self.compose(&d)
    }

    pub fn powi(&self, n: i32) -> Jet {
        if n == 0 {
            return Jet::constant(1.0, self.order);
        }
        let base = if n < 0 { self.recip() } else { *self };
        let mut out = base;
        for _ in 1..n.unsigned_abs() {
            out = out * base;
        }
        out
    }

    pub fn scaled(&self, k: f64) -> Jet {
        let mut out = *self;
        for c in out.c.iter_mut() {
            *c *= k;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = self.truncated(order);
        for s in 0..out.ncoeff() {
            out.c[s] += rhs.c[s];
        }
        out
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = self.truncated(order);
        for s in 0..out.ncoeff() {
            out.c[s] -= rhs.c[s];
        }
        out
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scaled(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(0.0, order);
        for sa in 0..DEG_OFFSET[order + 1] {
            let a = self.c[sa];
            if a == 0.0 {
                continue;
            }
            let da = DEGREE[sa] as usize;
            let ea = EXPONENTS[sa];
            for sb in 0..DEG_OFFSET[order + 1 - da] {
                let b = rhs.c[sb];
                if b == 0.0 {
                    continue;
                }
                let eb = EXPONENTS[sb];
                let slot = SLOT[(ea[0] + eb[0]) as usize][(ea[1] + eb[1]) as usize]
                    [(ea[2] + eb[2]) as usize][(ea[3] + eb[3]) as usize];
                out.c[slot as usize] += a * b;
            }
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scaled(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scaled(self)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut out = self;
        out.c[0] += rhs;
        out
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        let mut out = self;
        out.c[0] -= rhs;
        out
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.scaled(1.0 / rhs)
    }
}

/// Seed jets for the BL coordinates of `p` at the given truncation order.
pub fn coordinate_jets(t: f64, r: f64, theta: f64, phi: f64, order: usize) -> [Jet; NVARS] {
    [
        Jet::variable(t, 0, order),
        Jet::variable(r, 1, order),
        Jet::variable(theta, 2, order),
        Jet::variable(phi, 3, order),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn table_layout() {
        assert_eq!(DEG_OFFSET[MAX_ORDER + 1], NCOEFF);
        assert_eq!(EXPONENTS[0], [0, 0, 0, 0]);
        for s in 0..NCOEFF {
            let e = EXPONENTS[s];
            let d = (e[0] + e[1] + e[2] + e[3]) as usize;
            assert!(DEG_OFFSET[d] <= s && s < DEG_OFFSET[d + 1]);
        }
    }

    #[test]
    fn polynomial_partials() {
        // f = t^2 r + 3 theta phi at (2, 3, 5, 7)
        let [t, r, th, ph] = coordinate_jets(2.0, 3.0, 5.0, 7.0, 3);
        let f = t * t * r + 3.0 * th * ph;
        assert_eq!(f.value(), 12.0 + 105.0);
        // df/dt = 2 t r = 12
        assert_eq!(f.partial(0).value(), 12.0);
        // d2f/dt2 = 2 r = 6, via coeff: c_(2,0,0,0) = D^2/2!
        assert_eq!(f.coeff([2, 0, 0, 0]) * 2.0, 6.0);
        // d2f/dtheta dphi = 3
        assert_eq!(f.partial(2).partial(3).value(), 3.0);
        // mixed order irrelevant
        assert_eq!(f.partial(3).partial(2).value(), 3.0);
    }

    #[test]
    fn transcendental_chain() {
        // f = sin(r) * exp(t) / sqrt(theta); check against hand derivatives
        let (t0, r0, th0) = (0.3, 1.1, 2.4);
        let [t, r, th, _] = coordinate_jets(t0, r0, th0, 0.0, 2);
        let f = r.sin() * t.exp() / th.sqrt();
        let v = r0.sin() * t0.exp() / th0.sqrt();
        assert!(close(f.value(), v, 1e-15));
        let fr = r0.cos() * t0.exp() / th0.sqrt();
        assert!(close(f.partial(1).value(), fr, 1e-14));
        let fth = -0.5 * r0.sin() * t0.exp() / th0.powf(1.5);
        assert!(close(f.partial(2).value(), fth, 1e-14));
        let ftt = v; // exp in t
        assert!(close(f.partial(0).partial(0).value(), ftt, 1e-14));
    }

    #[test]
    fn fourth_order_consistency() {
        // order-4 jet of ln(1 + r^2) against the analytic fourth derivative
        let r0 = 0.7;
        let [_, r, _, _] = coordinate_jets(0.0, r0, 0.0, 0.0, 4);
        let f = (r * r + 1.0).ln();
        // d4/dr4 ln(1+x^2) = -12 (x^4 - 6x^2 + 1) / (1+x^2)^4
        let x = r0;
        let expect = -12.0 * (x.powi(4) - 6.0 * x * x + 1.0) / (1.0 + x * x).powi(4);
        let got = f.coeff([0, 4, 0, 0]) * 24.0;
        assert!(close(got, expect, 1e-13));
    }

    #[test]
    fn jet_order_overlap() {
        // derivatives computed at order 2 and order 3 agree on shared slots
        let [t, r, th, ph] = coordinate_jets(1.0, 2.5, 1.2, 0.4, 3);
        let f3 = (r * th.sin() + t * ph.cos()).exp();
        let [t, r, th, ph] = coordinate_jets(1.0, 2.5, 1.2, 0.4, 2);
        let f2 = (r * th.sin() + t * ph.cos()).exp();
        for s in 0..DEG_OFFSET[3] {
            assert_eq!(f3.c[s], f2.c[s]);
        }
    }

    proptest! {
        #[test]
        fn reciprocal_roundtrip(v in 0.1f64..10.0, seed in 0u8..4) {
            let j = Jet::variable(v, seed as usize, 3);
            let f = (j * j + 1.0).recip();
            let back = f.recip();
            let expect = j * j + 1.0;
            for s in 0..DEG_OFFSET[4] {
                prop_assert!(close(back.c[s], expect.c[s], 1e-12));
            }
        }

        #[test]
        fn sqrt_squares(v in 0.5f64..20.0) {
            let j = Jet::variable(v, 1, 4);
            let s = j.sqrt();
            let sq = s * s;
            for slot in 0..DEG_OFFSET[5] {
                prop_assert!(close(sq.c[slot], j.c[slot], 1e-12));
            }
        }
    }
}

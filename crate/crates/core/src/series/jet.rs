use std::ops::{Add, Div, Mul, Neg, Sub};

/// Second-order jet `(f, f', f'')` at a point, propagated through arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Self { v, d1, d2 }
    }

    pub const fn constant(v: f64) -> Self {
        Self { v, d1: 0.0, d2: 0.0 }
    }

    /// The affine map `s ↦ offset + slope·s`, seen as a jet in `s`.
    pub const fn affine(value: f64, slope: f64) -> Self {
        Self { v: value, d1: slope, d2: 0.0 }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Self::new(e, e * self.d1, e * (self.d2 + self.d1 * self.d1))
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        Self::new(r, -self.d1 * r * r, (2.0 * self.d1 * self.d1 * r - self.d2) * r * r)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        Jet::new(self.v * c, self.d1 * c, self.d2 * c)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

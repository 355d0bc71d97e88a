//! Exact arithmetic in `Q(j)`, `j = e^{2πi/3}`.
//!
//! Values are `x + y·j` with rational coordinates. Lattice membership for
//! the hexagonal tiling is decided here, never with a floating tolerance.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eisenstein {
    pub x: Rational64,
    pub y: Rational64,
}

impl Eisenstein {
    pub const ZERO: Self = Self::int(0, 0);
    pub const ONE: Self = Self::int(1, 0);
    pub const J: Self = Self::int(0, 1);
    /// `j² = -1 - j`.
    pub const J2: Self = Self::int(-1, -1);

    pub const fn int(x: i64, y: i64) -> Self {
        Self {
            x: Rational64::new_raw(x, 1),
            y: Rational64::new_raw(y, 1),
        }
    }

    pub fn new(x: Rational64, y: Rational64) -> Self {
        Self { x, y }
    }

    /// The six units `±1, ±j, ±j²`.
    pub fn units() -> [Self; 6] {
        [Self::ONE, Self::J, Self::J2, -Self::ONE, -Self::J, -Self::J2]
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    /// `x + y·j̄ = (x - y) - y·j`.
    pub fn conj(self) -> Self {
        Self {
            x: self.x - self.y,
            y: -self.y,
        }
    }

    /// Squared modulus `x² - xy + y²`.
    pub fn norm(self) -> Rational64 {
        self.x * self.x - self.x * self.y + self.y * self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_complex(self) -> Complex64 {
        let x = ratio_to_f64(self.x);
        let y = ratio_to_f64(self.y);
        Complex64::new(x - 0.5 * y, SQRT3_2 * y)
    }

    /// Nearest Eisenstein integer to `z` together with the rounding distance.
    pub fn nearest_integer(z: Complex64) -> (Self, f64) {
        let y = z.im / SQRT3_2;
        let x = z.re + 0.5 * y;
        let (x0, y0) = (x.round(), y.round());
        // Rounding in the skew basis can miss by one; check the neighbours.
        let mut best = (Self::int(x0 as i64, y0 as i64), f64::INFINITY);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let cand = Self::int(x0 as i64 + dx, y0 as i64 + dy);
                let d = (cand.to_complex() - z).norm();
                if d < best.1 {
                    best = (cand, d);
                }
            }
        }
        best
    }

    /// Residue of an integral value modulo `1 - j` (which is `x + y mod 3`).
    pub fn class_mod_1_minus_j(&self) -> Option<u8> {
        if !self.is_integral() {
            return None;
        }
        Some((self.x.to_integer() + self.y.to_integer()).rem_euclid(3) as u8)
    }
}

fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Add for Eisenstein {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            x: self.x + o.x,
            y: self.y + o.y,
        }
    }
}

impl Sub for Eisenstein {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            x: self.x - o.x,
            y: self.y - o.y,
        }
    }
}

impl Neg for Eisenstein {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
        }
    }
}

impl Mul for Eisenstein {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let bd = self.y * o.y;
        Self {
            x: self.x * o.x - bd,
            y: self.x * o.y + self.y * o.x - bd,
        }
    }
}

impl Div for Eisenstein {
    type Output = Self;
    /// Panics on division by zero.
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(j)");
        let p = self * o.conj();
        Self {
            x: p.x / n,
            y: p.y / n,
        }
    }
}

impl Zero for Eisenstein {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        Eisenstein::is_zero(self)
    }
}

impl One for Eisenstein {
    fn one() -> Self {
        Self::ONE
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.y.is_negative() { '-' } else { '+' };
        write!(f, "{} {} {}j", self.x, sign, self.y.abs())
    }
}

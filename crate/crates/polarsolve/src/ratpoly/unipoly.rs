//! Dense univariate polynomials over an exact field.
//!
//! Coefficients are stored lowest degree first and trailing zeros are always
//! trimmed, so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};



use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly<T: Scalar> {
    coeffs: Vec<T>,
}

impl<T: Scalar> UniPoly<T> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(value: T) -> Self {
        Self::from_coeffs(vec![value])
    }

    /// The monomial `X`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![T::zero(), T::one()])
    }

    pub fn monomial(degree: usize, coeff: T) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = coeff;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        let mut p = Self::one();
        for r in roots {
            p = &p * &Self::from_coeffs(vec![-r.clone(), T::one()]);
        }
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coefficient(&self, degree: usize) -> T {
        self.coeffs.get(degree).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scaled(&self, factor: &T) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|c| c.clone() * factor).collect() }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lead) => {
                let lead = lead.clone();
                UniPoly { coeffs: self.coeffs.iter().map(|c| c.clone() / &lead).collect() }
            }
        }
    }

    /// Positive rescale into the cheapest equivalent representation (keeps
    /// the sign of every coefficient).
    pub fn rescaled(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        T::positive_rescale(&mut coeffs);
        UniPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * &T::from_i64(i as i64 + 1))
                .collect(),
        )
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let dlead = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![T::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap().clone() / &dlead;
            let shift = rd - dd;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let delta = factor.clone() * c;
                rem.coeffs[shift + i] = rem.coeffs[shift + i].clone() - &delta;
            }
            rem.trim();
            quot[shift] = factor;
        }
        (Self::from_coeffs(quot), rem)
    }

    pub fn rem(&self, modulus: &Self) -> Self {
        self.div_rem(modulus).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.rescaled();
        let mut b = other.rescaled();
        while !b.is_zero() {
            let r = a.rem(&b).rescaled();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, u, v)` with `u*self + v*other = g`,
    /// `g` monic (or zero).
    pub fn extended_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut u0 = Self::one();
        let mut u1 = Self::zero();
        let mut v0 = Self::zero();
        let mut v1 = Self::one();
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let u = &u0 - &(&q * &u1);
            let v = &v0 - &(&q * &v1);
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        match r0.leading() {
            None => (Self::zero(), Self::zero(), Self::zero()),
            Some(lead) => {
                let inv = T::one() / lead;
                (r0.scaled(&inv), u0.scaled(&inv), v0.scaled(&inv))
            }
        }
    }

    /// Monic squarefree part `self / gcd(self, self')`: same roots, all
    /// simple. Panics on zero input.
    pub fn squarefree_part(&self) -> Self {
        assert!(!self.is_zero(), "squarefree part of the zero polynomial");
        let g = self.gcd(&self.derivative());
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        (self * other).rem(modulus)
    }

    /// Sign of the value at a rational point: -1, 0 or +1.
    pub fn sign_at(&self, x: &T) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl<T: Scalar> Add for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn add(self, rhs: &UniPoly<T>) -> UniPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            coeffs.push(a + &b);
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl<T: Scalar> Sub for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn sub(self, rhs: &UniPoly<T>) -> UniPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
            coeffs.push(a - &b);
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl<T: Scalar> Mul for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn mul(self, rhs: &UniPoly<T>) -> UniPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + &(a.clone() * b);
            }
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl<T: Scalar> Neg for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn neg(self) -> UniPoly<T> {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl<T: Scalar> $trait for UniPoly<T> {
            type Output = UniPoly<T>;
            fn $method(self, rhs: UniPoly<T>) -> UniPoly<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<T: Scalar> Neg for UniPoly<T> {
    type Output = UniPoly<T>;
    fn neg(self) -> UniPoly<T> {
        -&self
    }
}

impl<T: Scalar> fmt::Display for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, coeff) in self.coeffs.iter().enumerate().rev() {
            if coeff.is_zero() {
                continue;
            }
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = coeff.abs();
            if deg == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "X")?;
                if deg > 1 {
                    write!(f, "^{deg}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    
    use crate::scalar::rat;
    use crate::UPoly;

    #[test]
    fn gcd_examples() {
        // gcd(X^2 - 1, X - 1) = X - 1
        let a = UPoly::from_i64_coeffs(&[-1, 0, 1]);
        let b = UPoly::from_i64_coeffs(&[-1, 1]);
        assert_eq!(a.gcd(&b), b);

        // gcd(p, 0) = monic(p)
        let p = UPoly::from_i64_coeffs(&[2, 4]);
        assert_eq!(p.gcd(&UPoly::zero()), UPoly::from_coeffs(vec![rat(1, 2), rat(1, 1)]));

        // gcd((X-2)^2 (X+1), (X-2)(X+3)) = X - 2
        let a = UPoly::from_roots(&[rat(2, 1), rat(2, 1), rat(-1, 1)]);
        let b = UPoly::from_roots(&[rat(2, 1), rat(-3, 1)]);
        assert_eq!(a.gcd(&b), UPoly::from_i64_coeffs(&[-2, 1]));

        assert_eq!(UPoly::zero().gcd(&UPoly::zero()), UPoly::zero());
    }

    #[test]
    fn squarefree_part_examples() {
        let cube = UPoly::from_roots(&[rat(1, 1), rat(1, 1), rat(1, 1)]);
        assert_eq!(cube.squarefree_part(), UPoly::from_i64_coeffs(&[-1, 1]));

        let sf = UPoly::from_i64_coeffs(&[-1, 0, 1]);
        assert_eq!(sf.squarefree_part(), sf);

        let pq = UPoly::from_roots(&[rat(1, 1), rat(2, 1)]);
        let squared = &pq * &pq;
        assert_eq!(squared.squarefree_part(), pq);
    }

    #[test]
    #[should_panic(expected = "zero polynomial")]
    fn squarefree_part_of_zero_panics() {
        UPoly::zero().squarefree_part();
    }

    #[test]
    fn squarefree_part_divides_and_is_coprime_with_derivative() {
        let p = UPoly::from_roots(&[rat(1, 2), rat(1, 2), rat(-3, 1), rat(0, 1), rat(0, 1)]);
        let sf = p.squarefree_part();
        assert!(sf.divides(&p));
        assert!(sf.gcd(&sf.derivative()).is_constant());
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = UPoly::from_i64_coeffs(&[3, -2, 0, 5, 1]);
        let b = UPoly::from_i64_coeffs(&[1, 1, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn extended_gcd_bezout_identity() {
        let a = UPoly::from_roots(&[rat(1, 1), rat(2, 1)]);
        let b = UPoly::from_roots(&[rat(3, 1)]);
        let (g, u, v) = a.extended_gcd(&b);
        assert_eq!(g, UPoly::one());
        assert_eq!(&(&u * &a) + &(&v * &b), g);
    }

    #[test]
    fn display_format() {
        let p = UPoly::from_coeffs(vec![rat(1, 1), rat(0, 1), rat(-3, 2)]);
        assert_eq!(p.to_string(), "-3/2*X^2 + 1");
    }
}

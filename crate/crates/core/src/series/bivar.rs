//! Finite bivariate Laurent polynomials in S and T with a declared exponent
//! window. These are the desk model of k((S))((T)): an element is stored as
//! the finitely many monomials inside the window it stands for.

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::Coeff;

/// Inclusive exponent window [s_lo, s_hi] × [t_lo, t_hi].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub s_lo: i64,
    pub s_hi: i64,
    pub t_lo: i64,
    pub t_hi: i64,
}

impl Window {
    pub fn new(s_lo: i64, s_hi: i64, t_lo: i64, t_hi: i64) -> Self {
        Window { s_lo, s_hi, t_lo, t_hi }
    }

    /// [-i, i] × [-j, j].
    pub fn symmetric(i: i64, j: i64) -> Self {
        Window::new(-i, i, -j, j)
    }

    pub fn contains(&self, (a, b): (i64, i64)) -> bool {
        (self.s_lo..=self.s_hi).contains(&a) && (self.t_lo..=self.t_hi).contains(&b)
    }

    pub fn hull(&self, other: &Window) -> Window {
        Window::new(
            self.s_lo.min(other.s_lo),
            self.s_hi.max(other.s_hi),
            self.t_lo.min(other.t_lo),
            self.t_hi.max(other.t_hi),
        )
    }

    pub fn minkowski(&self, other: &Window) -> Window {
        Window::new(
            self.s_lo + other.s_lo,
            self.s_hi + other.s_hi,
            self.t_lo + other.t_lo,
            self.t_hi + other.t_hi,
        )
    }
}

#[derive(Clone)]
pub struct BivarLaurent<R> {
    terms: BTreeMap<(i64, i64), R>,
    window: Window,
    zero: R,
}

impl<R: Coeff> PartialEq for BivarLaurent<R> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<R: Coeff + fmt::Display> fmt::Display for BivarLaurent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if a != 0 {
                write!(f, "*S^{a}")?;
            }
            if b != 0 {
                write!(f, "*T^{b}")?;
            }
        }
        Ok(())
    }
}

impl<R: Coeff> fmt::Debug for BivarLaurent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<R: Coeff> BivarLaurent<R> {
    pub fn zero(window: Window, zero: R) -> Self {
        BivarLaurent {
            terms: BTreeMap::new(),
            window,
            zero,
        }
    }

    /// Sum of the given monomials; the window is widened to cover them.
    pub fn from_terms<I>(window: Window, terms: I, zero: R) -> Self
    where
        I: IntoIterator<Item = ((i64, i64), R)>,
    {
        let mut out = Self::zero(window, zero);
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub fn monomial(a: i64, b: i64, c: R) -> Self {
        let zero = c.zero_like();
        Self::from_terms(Window::new(a, a, b, b), [((a, b), c)], zero)
    }

    pub fn add_term(&mut self, (a, b): (i64, i64), c: &R) {
        if c.is_zero() {
            return;
        }
        self.window = self.window.hull(&Window::new(a, a, b, b));
        let entry = self.terms.entry((a, b)).or_insert_with(|| self.zero.clone());
        *entry = entry.add(c);
        if entry.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = self.window.hull(&window);
        self
    }

    pub fn zero_coeff(&self) -> &R {
        &self.zero
    }

    pub fn coeff(&self, a: i64, b: i64) -> R {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &R)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.window = out.window.hull(&other.window);
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map_coeffs(|x| c.mul(x))
    }

    pub fn map_coeffs(&self, f: impl Fn(&R) -> R) -> Self {
        let mut out = Self::zero(self.window, self.zero.clone());
        for (k, c) in &self.terms {
            out.add_term(*k, &f(c));
        }
        out
    }

    /// Exact product; the window is the Minkowski sum of the factors' windows.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.window.minkowski(&other.window), self.zero.clone());
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), &c1.mul(c2));
            }
        }
        out
    }

    /// Keep only monomials inside `window`.
    pub fn clip(&self, window: Window) -> Self {
        let mut out = Self::zero(window, self.zero.clone());
        for (k, c) in &self.terms {
            if window.contains(*k) {
                out.add_term(*k, c);
            }
        }
        out.window = window;
        out
    }

    /// Keep monomials satisfying `keep`.
    pub fn filter(&self, keep: impl Fn((i64, i64)) -> bool) -> Self {
        let mut out = Self::zero(self.window, self.zero.clone());
        for (k, c) in &self.terms {
            if keep(*k) {
                out.add_term(*k, c);
            }
        }
        out
    }

    /// Multiply by S^a T^b.
    pub fn shift(&self, a: i64, b: i64) -> Self {
        let mut out = Self::zero(self.window.minkowski(&Window::new(a, a, b, b)), self.zero.clone());
        for (&(x, y), c) in &self.terms {
            out.add_term((x + a, y + b), c);
        }
        out
    }

    /// ∂/∂S.
    pub fn d_s(&self) -> Self {
        let mut out = Self::zero(self.window.minkowski(&Window::new(-1, -1, 0, 0)), self.zero.clone());
        for (&(a, b), c) in &self.terms {
            out.add_term((a - 1, b), &c.scale_int(a));
        }
        out
    }

    /// ∂/∂T.
    pub fn d_t(&self) -> Self {
        let mut out = Self::zero(self.window.minkowski(&Window::new(0, 0, -1, -1)), self.zero.clone());
        for (&(a, b), c) in &self.terms {
            out.add_term((a, b - 1), &c.scale_int(b));
        }
        out
    }
}

impl<R: Coeff> Coeff for BivarLaurent<R> {
    fn zero_like(&self) -> Self {
        Self::zero(self.window, self.zero.clone())
    }
    fn one_like(&self) -> Self {
        Self::from_terms(self.window, [((0, 0), self.zero.one_like())], self.zero.clone())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        BivarLaurent::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        BivarLaurent::sub(self, rhs)
    }
    fn neg(&self) -> Self {
        BivarLaurent::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        BivarLaurent::mul(self, rhs)
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::from_terms(self.window, [((0, 0), self.zero.from_int_like(n))], self.zero.clone())
    }
    /// Only monomials with invertible coefficient are units here.
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(a, b), c) = self.terms.iter().next()?;
        Some(Self::monomial(-a, -b, c.try_inv()?))
    }
    fn scale_int(&self, n: i64) -> Self {
        self.map_coeffs(|c| c.scale_int(n))
    }
}

use std::cmp::Ordering;
use std::fmt;

/// Upper bound on the number of ring variables (including auxiliary
/// variables adjoined for saturation and homogenization).
pub const MAX_VARS: usize = 16;

/// Exponent vector in ℕⁿ with a cached total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: [0; MAX_VARS], deg: 0 }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Self::one();
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u16::try_from(e).expect("exponent overflow");
            m.deg += e;
        }
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self, n: usize) -> Vec<u32> {
        self.exps[..n].iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn set_exp(&mut self, i: usize, e: u32) {
        self.deg = self.deg - self.exps[i] as u32 + e;
        self.exps[i] = u16::try_from(e).expect("exponent overflow");
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] += other.exps[i];
        }
        m.deg += other.deg;
        m
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    /// `other / self`, assuming `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = *other;
        for i in 0..MAX_VARS {
            m.exps[i] -= self.exps[i];
        }
        m.deg -= self.deg;
        m
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = Self::one();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(other.exps[i]);
            m.deg += m.exps[i] as u32;
        }
        m
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] *= k as u16;
        }
        m.deg *= k;
        m
    }

    /// Exponent vector with variable `i` removed (shifting later ones down).
    pub fn drop_var(&self, i: usize) -> Monomial {
        let mut m = Self::one();
        let mut k = 0;
        for j in 0..MAX_VARS {
            if j == i {
                continue;
            }
            m.exps[k] = self.exps[j];
            k += 1;
        }
        m.deg = self.deg - self.exps[i] as u32;
        m
    }

    /// Exponent vector with a new zero variable inserted at position `i`.
    pub fn insert_var(&self, i: usize, e: u32) -> Monomial {
        let mut m = Self::one();
        let mut k = 0;
        for j in 0..MAX_VARS {
            if j == i {
                m.exps[j] = e as u16;
                continue;
            }
            if k < MAX_VARS {
                m.exps[j] = self.exps[k];
            }
            k += 1;
        }
        m.deg = self.deg + e;
        m
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// Monomial orders used by the Gröbner machinery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    GrLex,
    /// Degree-compatible order for homogenized ideals in which a higher power
    /// of the homogenizing variable `h` wins. Dehomogenizing a basis for this
    /// order yields a standard basis for the local (lowest-degree-first) order.
    HomogLocal { h: usize },
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial, n: usize) -> Ordering {
        match *self {
            MonomialOrder::GrevLex => a.deg.cmp(&b.deg).then_with(|| revlex(a, b, n)),
            MonomialOrder::Lex => lex(a, b, n),
            MonomialOrder::GrLex => a.deg.cmp(&b.deg).then_with(|| lex(a, b, n)),
            MonomialOrder::HomogLocal { h } => a
                .deg
                .cmp(&b.deg)
                .then_with(|| a.exps[h].cmp(&b.exps[h]))
                .then_with(|| revlex(a, b, n)),
        }
    }
}

#[inline]
fn lex(a: &Monomial, b: &Monomial, n: usize) -> Ordering {
    for i in 0..n {
        match a.exps[i].cmp(&b.exps[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Reverse-lex tiebreak: smaller exponent in the last differing variable wins.
#[inline]
fn revlex(a: &Monomial, b: &Monomial, n: usize) -> Ordering {
    for i in (0..n).rev() {
        match a.exps[i].cmp(&b.exps[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_vs_lex() {
        // x*z^2 vs y^3 (n = 3): equal degree; grevlex looks at z first
        let a = Monomial::from_exps(&[1, 0, 2]);
        let b = Monomial::from_exps(&[0, 3, 0]);
        assert_eq!(MonomialOrder::GrevLex.cmp(&a, &b, 3), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b, 3), Ordering::Greater);
        assert_eq!(MonomialOrder::GrLex.cmp(&a, &b, 3), Ordering::Greater);
    }

    #[test]
    fn homog_local_prefers_h() {
        // z^2 vs z*h in k[z, h]: same degree, h-heavier is larger
        let zz = Monomial::from_exps(&[2, 0]);
        let zh = Monomial::from_exps(&[1, 1]);
        let o = MonomialOrder::HomogLocal { h: 1 };
        assert_eq!(o.cmp(&zh, &zz, 2), Ordering::Greater);
    }

    #[test]
    fn divisibility() {
        let a = Monomial::from_exps(&[1, 2]);
        let b = Monomial::from_exps(&[2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b), Monomial::from_exps(&[1, 0, 1]));
        assert_eq!(a.lcm(&Monomial::from_exps(&[0, 3])), Monomial::from_exps(&[1, 3]));
    }

    #[test]
    fn var_insert_drop() {
        let a = Monomial::from_exps(&[1, 2, 3]);
        assert_eq!(a.insert_var(1, 5), Monomial::from_exps(&[1, 5, 2, 3]));
        assert_eq!(a.insert_var(1, 5).drop_var(1), a);
    }
}

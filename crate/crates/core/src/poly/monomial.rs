use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// `x^a · y^b · z^c`.
///
/// Ordering is graded lexicographic with `x > y > z`, arranged so that the
/// *largest* monomial sorts first: iterating a sorted collection yields
/// `x^d, x^(d-1)y, x^(d-1)z, …, z^d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u32; 3],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0, 0, 0] };

    pub const fn new(a: u32, b: u32, c: u32) -> Self {
        Self { exps: [a, b, c] }
    }

    pub fn var(axis: usize) -> Self {
        let mut exps = [0; 3];
        exps[axis] = 1;
        Self { exps }
    }

    pub fn exps(&self) -> [u32; 3] {
        self.exps
    }

    pub fn exp(&self, axis: usize) -> u32 {
        self.exps[axis]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps[0] + other.exps[0], self.exps[1] + other.exps[1], self.exps[2] + other.exps[2])
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = [0; 3];
        for (k, slot) in e.iter_mut().enumerate() {
            *slot = self.exps[k].checked_sub(other.exps[k])?;
        }
        Some(Monomial { exps: e })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (name, &e) in ['x', 'y', 'z'].iter().zip(self.exps.iter()) {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The canonical basis of `V_d`, in the crate's monomial order.
pub fn basis(d: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push(Monomial::new(a, b, d - a - b));
        }
    }
    out
}

/// Position of `m` in [`basis`]`(m.degree())`.
pub fn basis_index(m: &Monomial) -> usize {
    let d = m.degree();
    let [a, b, _] = m.exps;
    // Monomials with x-exponent > a come first: sum_{k=a+1}^{d} (d-k+1).
    let before: u32 = (a + 1..=d).map(|k| d - k + 1).sum();
    (before + (d - a - b)) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes_and_order() {
        for d in 0..7 {
            let b = basis(d);
            assert_eq!(b.len() as u32, (d + 1) * (d + 2) / 2);
            assert!(b.windows(2).all(|w| w[0] < w[1]));
            for (i, m) in b.iter().enumerate() {
                assert_eq!(basis_index(m), i);
            }
        }
        assert_eq!(
            basis(2),
            [
                Monomial::new(2, 0, 0),
                Monomial::new(1, 1, 0),
                Monomial::new(1, 0, 1),
                Monomial::new(0, 2, 0),
                Monomial::new(0, 1, 1),
                Monomial::new(0, 0, 2),
            ]
        );
    }

    #[test]
    fn division() {
        let m = Monomial::new(2, 1, 0);
        assert_eq!(m.div(&Monomial::new(1, 1, 0)), Some(Monomial::new(1, 0, 0)));
        assert_eq!(m.div(&Monomial::new(0, 0, 1)), None);
        assert!(Monomial::ONE.divides(&m));
    }
}

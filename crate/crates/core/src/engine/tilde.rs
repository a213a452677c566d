//! `Ã_n = A_n C_{n-1} − A_{n-1} C_n` and `B̃_n = B_n C_{n-1} − B_{n-1} C_n`.
//!
//! Both are kept scaled by `p^{F_n}` with `F_n = E_n + E_{n-1}`, once from
//! the closed form and once from the three-term recurrence
//! `X̃_n = −b_n X̃_{n-1} − a_{n-1} X̃_{n-2} + X̃_{n-3}` (n ≥ 2).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::convergents::{scaled_digit, unscale};
use super::{Convergents, Coord, Expansion};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TildeTable {
    prime: crate::padic::Prime,
    /// `F_n` at offset `n + 1`.
    scale: Vec<u64>,
    recurrence: [Vec<BigInt>; 2],
    closed: [Vec<BigInt>; 2],
}

fn slot(c: Coord) -> usize {
    match c {
        Coord::A => 0,
        Coord::B => 1,
        Coord::C => panic!("no tilde sequence for C"),
    }
}

impl TildeTable {
    pub fn new(e: &Expansion, conv: &Convergents) -> Self {
        let p = e.prime();
        let len = e.len() as i64;
        let mut scale = Vec::new();
        let mut closed = [Vec::new(), Vec::new()];
        for n in -1..len {
            scale.push(conv.scale(n).unwrap() + conv.scale(n - 1).unwrap());
            let tc0 = conv.scaled(Coord::C, n).unwrap();
            let tc1 = conv.scaled(Coord::C, n - 1).unwrap();
            for c in [Coord::A, Coord::B] {
                let x0 = conv.scaled(c, n).unwrap();
                let x1 = conv.scaled(c, n - 1).unwrap();
                closed[slot(c)].push(x0 * tc1 - x1 * tc0);
            }
        }

        let mut recurrence = [Vec::new(), Vec::new()];
        if len >= 1 {
            let f = |n: i64| scale[(n + 1) as usize];
            let p2e0 = p.pow(f(0));
            recurrence[0] = vec![BigInt::zero(), -p2e0.clone()];
            recurrence[1] = vec![BigInt::zero(), BigInt::zero()];
            if len >= 2 {
                // F_1 = 2 e0 + k_1
                recurrence[0].push(scaled_digit(p, &e.b()[1], f(1) as i64));
                recurrence[1].push(p.pow(f(1)));
            }
            for n in 2..len {
                let (kn, k1, k2) = (e.k(n), e.k(n - 1), e.k(n - 2));
                let c1 = -scaled_digit(p, &e.b()[n as usize], kn + k1);
                let c2 = -scaled_digit(p, &e.a()[(n - 1) as usize], kn + 2 * k1 + k2);
                let c3 = p.pow(f(n) - f(n - 3));
                for v in recurrence.iter_mut() {
                    let m = v.len();
                    let next = &c1 * &v[m - 1] + &c2 * &v[m - 2] + &c3 * &v[m - 3];
                    v.push(next);
                }
            }
        }
        TildeTable {
            prime: p,
            scale,
            recurrence,
            closed,
        }
    }

    fn offset(&self, n: i64, avail: usize) -> Result<usize> {
        let i = n + 1;
        if i < 0 || i as usize >= avail {
            return Err(Error::IndexOutOfRange {
                index: n,
                available: avail.saturating_sub(1),
            });
        }
        Ok(i as usize)
    }

    /// Highest index covered by the recurrence, plus one.
    pub fn len(&self) -> usize {
        self.scale.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn scale(&self, n: i64) -> Result<u64> {
        Ok(self.scale[self.offset(n, self.scale.len())?])
    }

    pub fn scaled_closed(&self, c: Coord, n: i64) -> Result<&BigInt> {
        let v = &self.closed[slot(c)];
        Ok(&v[self.offset(n, v.len())?])
    }

    pub fn scaled_recurrence(&self, c: Coord, n: i64) -> Result<&BigInt> {
        let v = &self.recurrence[slot(c)];
        Ok(&v[self.offset(n, v.len())?])
    }

    /// `(Ã_n, B̃_n)` from the recurrence.
    pub fn value(&self, n: i64) -> Result<(BigRational, BigRational)> {
        let f = self.scale(n)?;
        Ok((
            unscale(self.prime, self.scaled_recurrence(Coord::A, n)?, f),
            unscale(self.prime, self.scaled_recurrence(Coord::B, n)?, f),
        ))
    }

    /// Whether recurrence and closed form agree at `n`.
    pub fn agrees(&self, n: i64) -> Result<bool> {
        Ok(self.scaled_closed(Coord::A, n)? == self.scaled_recurrence(Coord::A, n)?
            && self.scaled_closed(Coord::B, n)? == self.scaled_recurrence(Coord::B, n)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::expand;
    use crate::padic::{PAdicScalar, Prime};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn seeds_and_agreement() {
        let p = Prime::new(5).unwrap();
        let e = expand(&PAdicScalar::exact(p, q(32, 5)), &PAdicScalar::exact(p, q(26, 5)), 10).unwrap();
        let c = Convergents::new(&e);
        let t = TildeTable::new(&e, &c);
        assert_eq!(t.value(-1).unwrap(), (q(0, 1), q(0, 1)));
        assert_eq!(t.value(0).unwrap(), (q(-1, 1), q(0, 1)));
        assert_eq!(t.value(1).unwrap(), (q(1, 1), q(1, 1)));
        for n in -1..2 {
            assert!(t.agrees(n).unwrap());
        }
    }

    #[test]
    fn longer_agreement() {
        let p = Prime::new(7).unwrap();
        let e = expand(
            &PAdicScalar::exact(p, q(123457, 3 * 49)),
            &PAdicScalar::exact(p, q(-98765, 11)),
            30,
        )
        .unwrap();
        let c = Convergents::new(&e);
        let t = TildeTable::new(&e, &c);
        for n in -1..e.len() as i64 {
            assert!(t.agrees(n).unwrap(), "n = {n}");
        }
    }
}

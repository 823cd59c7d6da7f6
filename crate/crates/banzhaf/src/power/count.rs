//! Exact coalition counting via subset-sum generating functions.
//!
//! A [`CountVector`] stores, for every vote total `t`, the number of
//! coalitions of the folded players whose votes sum to exactly `t`: the
//! coefficients of the polynomial `prod_i (1 + x^{w_i})`. Folding a player
//! in is one in-place convolution pass; taking one out is the inverse pass.
//!
//! Counts reach `2^n`, far past `u64`, so every coefficient is kept as a
//! fixed number of 64-bit limbs in one flat allocation. The width is chosen
//! from the player count so no count can overflow, which turns "arbitrary
//! precision" into straight-line carry arithmetic: a 191-player body with
//! five million total votes needs three limbs per coefficient and about
//! 120 MB, instead of millions of heap-allocated big integers.

use num_bigint::BigUint;
use num_traits::Zero;
use std::fmt;

use super::PowerError;
use crate::game::VotingBody;

/// Coalition counts per vote total, exact at any scale.
#[derive(Clone, PartialEq, Eq)]
pub struct CountVector {
    limbs: usize,
    players_folded: usize,
    weight_sum: u64,
    data: Vec<u64>,
}

impl fmt::Debug for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CountVector")
            .field("players_folded", &self.players_folded)
            .field("weight_sum", &self.weight_sum)
            .field("limbs", &self.limbs)
            .finish()
    }
}

#[inline]
fn add_limbs(dst: &mut [u64], src: &[u64]) -> u64 {
    let mut carry = 0u64;
    for (d, &s) in dst.iter_mut().zip(src) {
        let (v, c1) = d.overflowing_add(s);
        let (v, c2) = v.overflowing_add(carry);
        *d = v;
        carry = (c1 | c2) as u64;
    }
    carry
}

#[inline]
fn sub_limbs(dst: &mut [u64], src: &[u64]) -> u64 {
    let mut borrow = 0u64;
    for (d, &s) in dst.iter_mut().zip(src) {
        let (v, b1) = d.overflowing_sub(s);
        let (v, b2) = v.overflowing_sub(borrow);
        *d = v;
        borrow = (b1 | b2) as u64;
    }
    borrow
}

fn limbs_to_biguint(limbs: &[u64]) -> BigUint {
    let mut bytes = Vec::with_capacity(limbs.len() * 8);
    for limb in limbs {
        bytes.extend_from_slice(&limb.to_le_bytes());
    }
    BigUint::from_bytes_le(&bytes)
}

impl CountVector {
    /// Builds the empty-set vector (`counts[0] = 1`) sized for a body with
    /// `n_players` voters and `total_votes` total weight.
    fn with_capacity(n_players: usize, total_votes: u64) -> Result<Self, PowerError> {
        // counts and their window sums are bounded by 2^n, which needs n+1 bits
        let limbs = (n_players + 1).div_ceil(64);
        let entries = usize::try_from(total_votes)
            .ok()
            .and_then(|t| t.checked_add(1))
            .ok_or(PowerError::Resource {
                bytes: (total_votes as u128 + 1) * limbs as u128 * 8,
            })?;
        let size = entries
            .checked_mul(limbs)
            .ok_or(PowerError::Resource {
                bytes: entries as u128 * limbs as u128 * 8,
            })?;
        let mut data = Vec::new();
        data.try_reserve_exact(size).map_err(|_| PowerError::Resource {
            bytes: size as u128 * 8,
        })?;
        data.resize(size, 0);
        data[0] = 1;
        Ok(CountVector {
            limbs,
            players_folded: 0,
            weight_sum: 0,
            data,
        })
    }

    /// Number of players whose factors have been folded in.
    pub fn players_folded(&self) -> usize {
        self.players_folded
    }

    /// Sum of the folded weights; counts above this value are zero.
    pub fn weight_sum(&self) -> u64 {
        self.weight_sum
    }

    /// Most players this vector can ever hold without widening its limbs.
    pub fn player_capacity(&self) -> usize {
        self.limbs * 64 - 1
    }

    #[inline]
    fn entry(&self, t: u64) -> &[u64] {
        let i = t as usize * self.limbs;
        &self.data[i..i + self.limbs]
    }

    /// Exact number of folded-player coalitions summing to `t`.
    pub fn count(&self, t: u64) -> BigUint {
        if t > self.weight_sum {
            return BigUint::zero();
        }
        limbs_to_biguint(self.entry(t))
    }

    /// Sum of all counts; always `2^players_folded`.
    pub fn total(&self) -> BigUint {
        BigUint::from(1u32) << self.players_folded
    }

    /// Folds one more player of weight `w` into the counts.
    pub fn add_player(&mut self, w: u64) -> Result<(), PowerError> {
        assert!(w >= 1, "weights are strictly positive");
        if self.players_folded >= self.player_capacity() {
            return Err(PowerError::CapacityExceeded {
                capacity: self.player_capacity(),
            });
        }
        let new_sum = self
            .weight_sum
            .checked_add(w)
            .ok_or(PowerError::Resource { bytes: u128::MAX })?;
        let entries = new_sum as usize + 1;
        if entries * self.limbs > self.data.len() {
            let size = entries * self.limbs;
            self.data
                .try_reserve_exact(size - self.data.len())
                .map_err(|_| PowerError::Resource {
                    bytes: size as u128 * 8,
                })?;
            self.data.resize(size, 0);
        }
        // c'[t] = c[t] + c[t - w], descending so each c[t - w] is still old
        let limbs = self.limbs;
        let mut overflow = 0u64;
        for t in (w..=new_sum).rev() {
            let (lo, hi) = self.data.split_at_mut(t as usize * limbs);
            let src = (t - w) as usize * limbs;
            overflow |= add_limbs(&mut hi[..limbs], &lo[src..src + limbs]);
        }
        assert_eq!(overflow, 0, "coalition count overflowed its limb budget");
        self.players_folded += 1;
        self.weight_sum = new_sum;
        Ok(())
    }

    /// Counts for the body with one player of weight `w` removed.
    ///
    /// Exact inverse of [`CountVector::add_player`]. Fails with an
    /// integrity error if any intermediate count would go negative, which
    /// means no player of weight `w` is folded into this vector.
    pub fn remove_player(&self, w: u64) -> Result<CountVector, PowerError> {
        let mut out = CountVector {
            limbs: self.limbs,
            players_folded: 0,
            weight_sum: 0,
            data: vec![0; self.data.len()],
        };
        self.remove_player_into(w, &mut out)?;
        Ok(out)
    }

    /// Removal into a reused scratch vector, one linear pass over `self`.
    ///
    /// `out` must come from `clone()` or `remove_player()` of a vector with
    /// this one's dimensions.
    pub fn remove_player_into(&self, w: u64, out: &mut CountVector) -> Result<(), PowerError> {
        assert!(w >= 1, "weights are strictly positive");
        assert_eq!(out.data.len(), self.data.len(), "scratch dimensions differ");
        assert_eq!(out.limbs, self.limbs, "scratch dimensions differ");
        if self.players_folded == 0 || w > self.weight_sum {
            return Err(PowerError::Integrity {
                weight: w,
                vote_total: w.min(self.weight_sum),
            });
        }
        let limbs = self.limbs;
        // c⁻[t] = c[t] for t < w, then c⁻[t] = c[t] - c⁻[t - w]; a borrow
        // is an exact proof that weight w is absent
        let head = w as usize * limbs;
        out.data[..head].copy_from_slice(&self.data[..head]);
        for t in w..=self.weight_sum {
            let dst = t as usize * limbs;
            let src = (t - w) as usize * limbs;
            out.data[dst..dst + limbs].copy_from_slice(&self.data[dst..dst + limbs]);
            let (lo, hi) = out.data.split_at_mut(dst);
            if sub_limbs(&mut hi[..limbs], &lo[src..src + limbs]) != 0 {
                return Err(PowerError::Integrity {
                    weight: w,
                    vote_total: t,
                });
            }
        }
        out.players_folded = self.players_folded - 1;
        out.weight_sum = self.weight_sum - w;
        Ok(())
    }

    /// Exact sum of counts over the inclusive window `[lo, hi]`.
    pub fn window_sum(&self, lo: u64, hi: u64) -> BigUint {
        let hi = hi.min(self.weight_sum);
        if lo > hi {
            return BigUint::zero();
        }
        let mut acc = vec![0u64; self.limbs];
        let mut overflow = 0u64;
        for t in lo..=hi {
            overflow |= add_limbs(&mut acc, self.entry(t));
        }
        assert_eq!(overflow, 0, "window sum overflowed its limb budget");
        limbs_to_biguint(&acc)
    }

    /// Number of coalitions with vote sum at least `threshold`.
    pub fn winning_count(&self, threshold: u64) -> BigUint {
        self.window_sum(threshold, self.weight_sum)
    }

    /// Winning counts for several thresholds (sorted ascending) in one
    /// descending suffix-sum pass.
    pub(crate) fn winning_counts_multi(&self, thresholds: &[u64]) -> Vec<BigUint> {
        let mut results = vec![BigUint::zero(); thresholds.len()];
        let mut acc = vec![0u64; self.limbs];
        let mut overflow = 0u64;
        let mut cursor = self.weight_sum + 1; // lowest vote total already accumulated
        for (idx, &threshold) in thresholds.iter().enumerate().rev() {
            while cursor > threshold {
                cursor -= 1;
                overflow |= add_limbs(&mut acc, self.entry(cursor));
            }
            results[idx] = limbs_to_biguint(&acc);
        }
        assert_eq!(overflow, 0, "suffix sum overflowed its limb budget");
        results
    }
}

/// Builds the full-body count vector: one convolution pass per player.
pub fn build_count_vector(body: &VotingBody) -> Result<CountVector, PowerError> {
    let mut c = CountVector::with_capacity(body.n_players(), body.total_votes())?;
    for w in body.weights() {
        c.add_player(w)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(weights: &[u64]) -> VotingBody {
        VotingBody::from_weights(weights.iter().copied()).unwrap()
    }

    fn counts(c: &CountVector) -> Vec<u64> {
        use num_traits::ToPrimitive;
        (0..=c.weight_sum())
            .map(|t| c.count(t).to_u64().unwrap())
            .collect()
    }

    #[test]
    fn two_equal_players_give_binomial_counts() {
        let c = build_count_vector(&body(&[1, 1])).unwrap();
        assert_eq!(counts(&c), vec![1, 2, 1]);
        assert_eq!(c.total(), BigUint::from(4u32));
    }

    #[test]
    fn three_player_counts_match_enumeration() {
        // subsets of [3,2,2]: sums 0,3,2,5,2,5,4,7
        let c = build_count_vector(&body(&[3, 2, 2])).unwrap();
        assert_eq!(counts(&c), vec![1, 0, 2, 1, 1, 2, 0, 1]);
    }

    #[test]
    fn removal_inverts_addition() {
        let c = build_count_vector(&body(&[1, 1])).unwrap();
        let removed = c.remove_player(1).unwrap();
        assert_eq!(counts(&removed), vec![1, 1]);
        assert_eq!(removed.players_folded(), 1);

        let c = build_count_vector(&body(&[3, 2, 2])).unwrap();
        let removed = c.remove_player(3).unwrap();
        // subsets of [2,2]
        assert_eq!(counts(&removed), vec![1, 0, 2, 0, 1]);

        let mut back = removed.clone();
        back.add_player(3).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn removing_an_absent_weight_is_detected() {
        let c = build_count_vector(&body(&[3, 2, 2])).unwrap();
        let err = c.remove_player(4).unwrap_err();
        assert!(matches!(err, PowerError::Integrity { weight: 4, .. }));
        let err = c.remove_player(8).unwrap_err();
        assert!(matches!(err, PowerError::Integrity { .. }));
    }

    #[test]
    fn removal_down_to_the_empty_body() {
        let c = build_count_vector(&body(&[5])).unwrap();
        let empty = c.remove_player(5).unwrap();
        assert_eq!(empty.players_folded(), 0);
        assert_eq!(empty.count(0), BigUint::from(1u32));
        assert_eq!(empty.total(), BigUint::from(1u32));
    }

    #[test]
    fn window_and_winning_sums() {
        let c = build_count_vector(&body(&[3, 2, 2])).unwrap();
        assert_eq!(c.window_sum(0, 7), BigUint::from(8u32));
        assert_eq!(c.window_sum(4, 7), BigUint::from(4u32));
        assert_eq!(c.winning_count(4), BigUint::from(4u32));
        assert_eq!(c.winning_count(7), BigUint::from(1u32));
        assert_eq!(c.winning_count(0), BigUint::from(8u32));
        assert_eq!(c.window_sum(5, 3), BigUint::zero());
        assert_eq!(c.window_sum(6, 100), BigUint::from(1u32));

        let multi = c.winning_counts_multi(&[1, 4, 4, 7]);
        assert_eq!(
            multi,
            vec![
                BigUint::from(7u32),
                BigUint::from(4u32),
                BigUint::from(4u32),
                BigUint::from(1u32),
            ]
        );
    }

    #[test]
    fn palindrome_and_conservation_on_a_wider_body() {
        let c = build_count_vector(&body(&[9, 7, 5, 3, 3, 2, 1, 1])).unwrap();
        let total = c.weight_sum();
        assert_eq!(c.total(), BigUint::from(256u32));
        let mut sum = BigUint::zero();
        for t in 0..=total {
            assert_eq!(c.count(t), c.count(total - t), "palindrome broken at {t}");
            sum += c.count(t);
        }
        assert_eq!(sum, c.total());
    }

    #[test]
    fn player_capacity_is_enforced() {
        // one limb caps the vector at 63 players
        let mut c = CountVector::with_capacity(63, 100).unwrap();
        assert_eq!(c.player_capacity(), 63);
        for _ in 0..63 {
            c.add_player(1).unwrap();
        }
        assert!(matches!(
            c.add_player(1),
            Err(PowerError::CapacityExceeded { capacity: 63 })
        ));
    }

    #[test]
    fn limb_carries_propagate() {
        // 65 unit-weight players force two limbs and cross the u64 boundary
        let c = build_count_vector(&body(&vec![1u64; 65])).unwrap();
        assert_eq!(c.total(), BigUint::from(1u128 << 65));
        // central binomial coefficient C(65, 32)
        let expected: u128 = 3_609_714_217_008_132_870;
        assert_eq!(c.count(32), BigUint::from(expected));
        assert_eq!(c.window_sum(0, 65), BigUint::from(1u128 << 65));
    }
}

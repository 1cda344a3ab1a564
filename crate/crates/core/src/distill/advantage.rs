//! Repetition-code advantage distillation.
//!
//! Alice draws a secret bit c and announces m_i = x_i ⊕ c for a block of N symbols. Bob accepts
//! iff y_i ⊕ m_i is constant and takes that constant as his guess of c. Eve sees the
//! announcement, the acceptance decision and her own N symbols.
//!
//! Under the bit-flip symmetry of the attacked distribution every announcement pattern is
//! equivalent to the all-zero one, and the block statistics only depend on how many times each
//! Eve symbol occurs, so the exact evaluator sums over symbol counts instead of sequences.

use super::DistillError;
use crate::qkd::{binary_entropy, SymbolDistribution};

pub const MAX_BLOCK: usize = 64;
pub const MAX_EVE_ALPHABET: usize = 4;

/// Statistics of the accepted blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdOutcome {
    pub block_size: usize,
    pub p_accept: f64,
    /// P(Bob's guess ≠ c | accept).
    pub eps_post: f64,
    /// I(C; Bob's guess | accept), bits.
    pub i_ab: f64,
    /// I(C; Eve's view | accept), bits.
    pub i_ae: f64,
    /// H(C | Bob's guess, accept), bits.
    pub h_bob: f64,
    /// H(C | Eve's view, accept), bits.
    pub h_eve: f64,
}

impl AdOutcome {
    /// I(C;B̂) − I(C;E) = H(C|E) − H(C|B̂); the second form keeps its precision when both
    /// informations approach one bit.
    pub fn advantage(&self) -> f64 {
        self.h_eve - self.h_bob
    }

    /// Advantage above the resolution floor, taken relative to Eve's residual uncertainty
    /// (at most one bit) since both conditional entropies shrink geometrically with N.
    pub fn has_advantage(&self) -> bool {
        self.advantage() > ADVANTAGE_FLOOR * self.h_eve.min(1.0)
    }
}

pub const ADVANTAGE_FLOOR: f64 = 1e-9;

/// Calls `f` with every vector of `k` non-negative counts summing to `n`.
pub(crate) fn for_each_composition(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(remaining: usize, slot: usize, buf: &mut [usize], f: &mut dyn FnMut(&[usize])) {
        if slot + 1 == buf.len() {
            buf[slot] = remaining;
            f(buf);
            return;
        }
        for c in 0..=remaining {
            buf[slot] = c;
            rec(remaining - c, slot + 1, buf, f);
        }
    }
    let mut buf = vec![0; k];
    rec(n, 0, &mut buf, &mut f);
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for i in 1..=n {
        out[i] = out[i - 1] + (i as f64).ln();
    }
    out
}

/// Conditional table q[c][b̂][e] = P(b = b̂, e | a = c).
fn conditional_table(p: &SymbolDistribution) -> [[Vec<f64>; 2]; 2] {
    let k = p.eve_alphabet();
    let row = |c: usize, b: usize| -> Vec<f64> {
        let pa = p.p_a(c);
        (0..k).map(|e| if pa > 0.0 { p.p(c, b, e) / pa } else { 0.0 }).collect()
    };
    [[row(0, 0), row(0, 1)], [row(1, 0), row(1, 1)]]
}

/// `(H(X), H(X|Y))` for a binary X given as two rows over the values of Y.
fn conditional_entropy_rows(rows: &[Vec<f64>; 2]) -> (f64, f64) {
    let p0: f64 = rows[0].iter().sum();
    let p1: f64 = rows[1].iter().sum();
    let total = p0 + p1;
    let mut h_cond = 0.0;
    for (a, b) in rows[0].iter().zip(&rows[1]) {
        let col = a + b;
        if col > 0.0 {
            h_cond += col / total * binary_entropy(a.min(*b) / col);
        }
    }
    (binary_entropy(p0.min(p1) / total), h_cond)
}

/// Exact block statistics by summation over Eve's symbol counts.
pub fn ad_exact(p: &SymbolDistribution, block_size: usize) -> Result<AdOutcome, DistillError> {
    if block_size == 0 || block_size > MAX_BLOCK {
        return Err(DistillError::BlockSize(block_size));
    }
    let k = p.eve_alphabet();
    if k > MAX_EVE_ALPHABET {
        return Err(DistillError::Alphabet(k));
    }
    let n = block_size;
    let q = conditional_table(p);
    let lnq: Vec<Vec<Vec<f64>>> = q
        .iter()
        .map(|per_b| per_b.iter().map(|v| v.iter().map(|x| x.ln()).collect()).collect())
        .collect();
    let ln_fact = ln_factorials(n);

    // joint weights, rows c, columns = count vectors (Eve) or b̂ (Bob)
    let mut eve_rows: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    let mut bob = [[0.0_f64; 2]; 2];
    for_each_composition(n, k, |counts| {
        let ln_multinomial =
            ln_fact[n] - counts.iter().map(|&c| ln_fact[c]).sum::<f64>();
        for c in 0..2 {
            let mut col = 0.0;
            for b in 0..2 {
                let mut ln_w = ln_multinomial + (0.5f64).ln();
                let mut zero = false;
                for (e, &cnt) in counts.iter().enumerate() {
                    if cnt == 0 {
                        continue;
                    }
                    if q[c][b][e] == 0.0 {
                        zero = true;
                        break;
                    }
                    ln_w += cnt as f64 * lnq[c][b][e];
                }
                let w = if zero { 0.0 } else { ln_w.exp() };
                bob[c][b] += w;
                col += w;
            }
            eve_rows[c].push(col);
        }
    });

    let p_accept = bob[0][0] + bob[0][1] + bob[1][0] + bob[1][1];
    if !(p_accept > 0.0) {
        return Err(DistillError::NoAcceptance);
    }
    let eps_post = (bob[0][1] + bob[1][0]) / p_accept;
    let (h_c, h_bob) = conditional_entropy_rows(&[bob[0].to_vec(), bob[1].to_vec()]);
    let (_, h_eve) = conditional_entropy_rows(&eve_rows);
    Ok(AdOutcome {
        block_size,
        p_accept,
        eps_post,
        i_ab: (h_c - h_bob).max(0.0),
        i_ae: (h_c - h_eve).max(0.0),
        h_bob,
        h_eve,
    })
}

/// Smallest block size with a resolvable positive advantage, if any up to `n_max`.
pub fn ad_min_block(p: &SymbolDistribution, n_max: usize) -> Result<Option<usize>, DistillError> {
    if n_max > MAX_BLOCK {
        return Err(DistillError::BlockSize(n_max));
    }
    for n in 1..=n_max {
        if ad_exact(p, n)?.has_advantage() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkd::{mutual_information, symbol_distribution, AttackParams, Basis, EveMeasurement, VariablePair};

    fn table(d: f64, eve: EveMeasurement) -> SymbolDistribution {
        symbol_distribution(&AttackParams::new(d, eve).unwrap(), Basis::Z).unwrap()
    }

    #[test]
    fn compositions_are_counted() {
        let mut count = 0;
        for_each_composition(5, 3, |c| {
            assert_eq!(c.iter().sum::<usize>(), 5);
            count += 1;
        });
        assert_eq!(count, 21);
    }

    #[test]
    fn single_symbol_blocks_reduce_to_raw_distribution() {
        let p = table(0.12, EveMeasurement::HelstromBinary);
        let out = ad_exact(&p, 1).unwrap();
        assert!((out.p_accept - 1.0).abs() < 1e-14);
        assert!((out.eps_post - 0.12).abs() < 1e-12);
        assert!((out.i_ab - mutual_information(&p, VariablePair::AliceBob)).abs() < 1e-12);
        assert!((out.i_ae - mutual_information(&p, VariablePair::AliceEve)).abs() < 1e-12);
    }

    #[test]
    fn two_blocks_at_error_rate_point_two() {
        let p = table(0.2, EveMeasurement::HelstromBinary);
        let out = ad_exact(&p, 2).unwrap();
        assert!((out.p_accept - 0.68).abs() < 1e-12);
        assert!((out.eps_post - 0.04 / 0.68).abs() < 1e-12);
    }

    #[test]
    fn closed_form_bob_statistics() {
        let p = table(0.3, EveMeasurement::SquareRoot4);
        for n in [3, 7, 20] {
            let out = ad_exact(&p, n).unwrap();
            let (e, c) = (0.3f64.powi(n as i32), 0.7f64.powi(n as i32));
            assert!((out.p_accept - (e + c)).abs() < 1e-12);
            assert!((out.eps_post - e / (e + c)).abs() < 1e-12);
        }
    }

    #[test]
    fn block_statistics_decrease_with_block_size() {
        let p = table(0.2, EveMeasurement::HelstromBinary);
        let outs: Vec<_> = (1..=10).map(|n| ad_exact(&p, n).unwrap()).collect();
        for w in outs.windows(2) {
            assert!(w[1].eps_post < w[0].eps_post);
            assert!(w[1].p_accept < w[0].p_accept);
        }
    }

    #[test]
    fn min_block_examples() {
        let eve = EveMeasurement::HelstromBinary;
        assert_eq!(ad_min_block(&table(0.05, eve), 30).unwrap(), Some(1));
        assert_eq!(ad_min_block(&table(0.35, eve), 30).unwrap(), None);
        let n = ad_min_block(&table(0.25, eve), 12).unwrap();
        assert!(matches!(n, Some(k) if k > 1), "{n:?}");
    }

    #[test]
    fn block_size_limits() {
        let p = table(0.1, EveMeasurement::HelstromBinary);
        assert!(matches!(ad_exact(&p, 0), Err(DistillError::BlockSize(0))));
        assert!(matches!(ad_exact(&p, 65), Err(DistillError::BlockSize(65))));
        assert!(ad_exact(&p, 64).is_ok());
        let wide = SymbolDistribution::new(5, vec![0.05; 20]).unwrap();
        assert!(matches!(ad_exact(&wide, 2), Err(DistillError::Alphabet(5))));
    }
}

use super::attack::{attack_state, AttackParams, Basis, EveMeasurement, EVE_DIM};
use super::helstrom::helstrom_operators;
use super::QkdError;
use crate::qcore::{eig_hermitian, ComplexMatrix};
use crate::C64;

/// Joint table P(a, b, e) over Alice's bit, Bob's bit and Eve's symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDistribution {
    eve_alphabet: usize,
    probs: Vec<f64>,
}

impl SymbolDistribution {
    /// Table in `(2a + b)·|E| + e` order; entries must be non-negative and sum to one.
    pub fn new(eve_alphabet: usize, probs: Vec<f64>) -> Result<Self, QkdError> {
        if eve_alphabet == 0 || probs.len() != 4 * eve_alphabet {
            return Err(QkdError::Table("wrong table size"));
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(QkdError::Table("negative or non-finite entry"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(QkdError::Table("entries do not sum to one"));
        }
        Ok(Self { eve_alphabet, probs })
    }

    pub fn eve_alphabet(&self) -> usize {
        self.eve_alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn p(&self, a: usize, b: usize, e: usize) -> f64 {
        self.probs[(2 * a + b) * self.eve_alphabet + e]
    }

    pub fn p_ab(&self, a: usize, b: usize) -> f64 {
        (0..self.eve_alphabet).map(|e| self.p(a, b, e)).sum()
    }

    pub fn p_a(&self, a: usize) -> f64 {
        self.p_ab(a, 0) + self.p_ab(a, 1)
    }

    /// P(a ≠ b).
    pub fn error_rate(&self) -> f64 {
        self.p_ab(0, 1) + self.p_ab(1, 0)
    }

    pub fn joint_ab(&self) -> [[f64; 2]; 2] {
        [[self.p_ab(0, 0), self.p_ab(0, 1)], [self.p_ab(1, 0), self.p_ab(1, 1)]]
    }

    /// P(a, e) as rows over a.
    pub fn joint_ae(&self) -> Vec<Vec<f64>> {
        (0..2)
            .map(|a| {
                (0..self.eve_alphabet)
                    .map(|e| self.p(a, 0, e) + self.p(a, 1, e))
                    .collect()
            })
            .collect()
    }
}

/// Pair of variables for [`mutual_information`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariablePair {
    AliceBob,
    AliceEve,
}

/// h(p) in bits, accurate for p close to 0 or 1.
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let small = p.min(1.0 - p);
    if small <= 0.0 {
        return 0.0;
    }
    (-small * small.ln() - (1.0 - small) * (-small).ln_1p()) / std::f64::consts::LN_2
}

/// Shannon entropy in bits with 0·log 0 = 0.
pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// I(X;Y) = H(X) + H(Y) − H(X,Y) for a joint table given as rows over X.
pub fn mutual_information_table(joint: &[Vec<f64>]) -> f64 {
    let px: Vec<f64> = joint.iter().map(|row| row.iter().sum()).collect();
    let cols = joint.first().map_or(0, Vec::len);
    let py: Vec<f64> = (0..cols).map(|j| joint.iter().map(|row| row[j]).sum()).collect();
    let flat: Vec<f64> = joint.iter().flatten().copied().collect();
    (entropy(&px) + entropy(&py) - entropy(&flat)).max(0.0)
}

pub fn mutual_information(joint: &SymbolDistribution, pair: VariablePair) -> f64 {
    match pair {
        VariablePair::AliceBob => {
            let t = joint.joint_ab();
            mutual_information_table(&[t[0].to_vec(), t[1].to_vec()])
        }
        VariablePair::AliceEve => mutual_information_table(&joint.joint_ae()),
    }
}

fn outer4(v: &[C64; EVE_DIM]) -> ComplexMatrix<f64> {
    ComplexMatrix::outer(v, v)
}

/// Eve's POVM on her probe for the given conditional states `cond[2a + b]` (unnormalized).
fn eve_povm(
    kind: EveMeasurement,
    cond: &[[C64; EVE_DIM]; 4],
) -> Result<Vec<ComplexMatrix<f64>>, QkdError> {
    let projectors: Vec<_> = cond.iter().map(outer4).collect();
    match kind {
        EveMeasurement::HelstromBinary => {
            let rho0 = &projectors[0] + &projectors[1];
            let rho1 = &projectors[2] + &projectors[3];
            let r = helstrom_operators(&rho0, &rho1, 1.0, 1.0)?;
            let [p0, p1] = r.povm;
            Ok(vec![p0, p1])
        }
        EveMeasurement::SquareRoot4 => {
            let total = projectors
                .iter()
                .fold(ComplexMatrix::zeros(EVE_DIM, EVE_DIM), |acc, p| &acc + p);
            let eig = eig_hermitian(&total)?;
            let cutoff = 1e-12 * eig.values.last().copied().unwrap_or(1.0).max(1e-300);
            let inv_sqrt = eig.reconstruct_with(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
            let null = eig.reconstruct_with(|l| if l > cutoff { 0.0 } else { 0.25 });
            Ok(projectors
                .iter()
                .map(|p| &(&(&inv_sqrt * p) * &inv_sqrt) + &null)
                .collect())
        }
    }
}

/// P(A, B, E) after sifting to a common basis and Eve's measurement on her conditional probe.
pub fn symbol_distribution(
    params: &AttackParams,
    basis: Basis,
) -> Result<SymbolDistribution, QkdError> {
    let psi = attack_state(params);
    let cond = [
        psi.eve_conditional(basis, 0, 0),
        psi.eve_conditional(basis, 0, 1),
        psi.eve_conditional(basis, 1, 0),
        psi.eve_conditional(basis, 1, 1),
    ];
    let povm = eve_povm(params.eve(), &cond)?;
    let alphabet = povm.len();
    let mut probs = Vec::with_capacity(4 * alphabet);
    for v in &cond {
        for element in &povm {
            probs.push(element.sandwich(v, v).re.max(0.0));
        }
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    SymbolDistribution::new(alphabet, probs)
}

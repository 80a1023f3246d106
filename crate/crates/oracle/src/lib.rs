//! Reference computations that share no code with the engine they check.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use twomode::{Complex64, Factor, Mode, ModeMonomial, TwoModeState};

/// Dense ladder matrices `a0`, `a1` on the two-mode Fock space truncated at
/// `N + 4` quanta per mode. Products of up to four factors acting on an `N`-particle
/// state never reach the cutoff, so their expectations are exact.
pub struct DenseOracle {
    n: usize,
    cut: usize,
    a: [DMatrix<Complex64>; 2],
}

impl DenseOracle {
    pub fn new(n: usize) -> Self {
        let cut = n + 4;
        let dim = (cut + 1) * (cut + 1);
        let idx = |n0: usize, n1: usize| n0 * (cut + 1) + n1;
        let mut a0 = DMatrix::zeros(dim, dim);
        let mut a1 = DMatrix::zeros(dim, dim);
        for n0 in 0..=cut {
            for n1 in 0..=cut {
                if n0 > 0 {
                    a0[(idx(n0 - 1, n1), idx(n0, n1))] = Complex64::new((n0 as f64).sqrt(), 0.0);
                }
                if n1 > 0 {
                    a1[(idx(n0, n1 - 1), idx(n0, n1))] = Complex64::new((n1 as f64).sqrt(), 0.0);
                }
            }
        }
        Self {
            n,
            cut,
            a: [a0, a1],
        }
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    fn embed(&self, s: &TwoModeState) -> DVector<Complex64> {
        assert_eq!(s.n_particles(), self.n);
        let mut v = DVector::zeros((self.cut + 1) * (self.cut + 1));
        for (l, c) in s.amplitudes().iter().enumerate() {
            v[(self.n - l) * (self.cut + 1) + l] = *c;
        }
        v
    }

    fn matrix(&self, m: Mode) -> &DMatrix<Complex64> {
        match m {
            Mode::Zero => &self.a[0],
            Mode::One => &self.a[1],
        }
    }

    /// `op |ψ>` by successive dense matrix-vector products.
    fn apply(&self, psi: &DVector<Complex64>, factors: &[Factor]) -> DVector<Complex64> {
        let mut v = psi.clone();
        for f in factors.iter().rev() {
            v = match *f {
                Factor::Annihilate(m) => self.matrix(m) * v,
                Factor::Create(m) => self.matrix(m).adjoint() * v,
            };
        }
        v
    }

    /// `<ψ|op|ψ>` for every operator, split as `(L+ ψ)^† (R ψ)` with `op = L R` so that
    /// half products are shared between operators.
    pub fn expectations(&self, s: &TwoModeState, ops: &[ModeMonomial]) -> Vec<Complex64> {
        let psi = self.embed(s);
        let mut cache: HashMap<Vec<Factor>, DVector<Complex64>> = HashMap::new();
        let mut half = |factors: Vec<Factor>| {
            cache
                .entry(factors.clone())
                .or_insert_with(|| self.apply(&psi, &factors))
                .clone()
        };
        ops.iter()
            .map(|op| {
                let f = op.factors();
                let (l, r) = f.split_at(f.len() / 2);
                let left: Vec<Factor> = l.iter().rev().map(|x| x.adjoint()).collect();
                half(left).dotc(&half(r.to_vec()))
            })
            .collect()
    }
}

/// Every product of `len` factors drawn from `a0, a1, a0+, a1+`.
pub fn all_monomials(len: usize) -> Vec<ModeMonomial> {
    let alphabet = [
        Factor::Annihilate(Mode::Zero),
        Factor::Annihilate(Mode::One),
        Factor::Create(Mode::Zero),
        Factor::Create(Mode::One),
    ];
    (0..4usize.pow(len as u32))
        .map(|code| {
            let factors = (0..len).map(|k| alphabet[(code >> (2 * k)) & 3]).collect();
            ModeMonomial::new(factors).expect("at most four factors")
        })
        .collect()
}

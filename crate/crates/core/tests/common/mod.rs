//! Shared fixtures, random generators and an independent trace oracle.
#![allow(dead_code)]

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use gkcalc_core::algebra::GAlgebra;
use gkcalc_core::amatrix::AlgMatrix;
use gkcalc_core::levelone::S1Element;
use gkcalc_core::oracle::Oracle;
use gkcalc_core::workspace::Workspace;
use gkcalc_core::{FiniteGroup, QMatrix, Rational, Scalar};

/// Algebras not in the default corpus: M₃(ℂ) and the ℤ/3 world.
pub const EXTRA: &str = r#"{
  "groups": { "1": "trivial", "Z3": { "cyclic": 3 } },
  "algebras": {
    "C": { "complex": { "group": "1" } },
    "M3": { "corner": { "base": "C", "size": 3, "embedding": "e3" } },
    "Cw": { "complex": { "group": "Z3" } },
    "Lw": { "averaging": { "base": "Cw", "embedding": "avg3" } },
    "CCw": { "direct_sum": ["Cw", "Cw"] }
  },
  "homs": {
    "gen_w": { "matrix": { "source": "Cw", "target": "Lw", "matrix": [[1],[0],[0],[0],[0],[0],[0],[0],[0]] } },
    "iw1": { "inclusion": { "sum": "CCw", "summand": 0 } },
    "iw2": { "inclusion": { "sum": "CCw", "summand": 1 } },
    "pw2": { "projection": { "sum": "CCw", "summand": 1 } },
    "pw1": { "projection": { "sum": "CCw", "summand": 0 } }
  },
  "sequences": { "s_w": { "i": "iw1", "f": "pw2", "s": "iw2" } }
}"#;

pub fn corpus() -> Workspace {
    Workspace::default_corpus()
}

pub fn extra() -> Workspace {
    Workspace::from_json(EXTRA, 64).expect("extra fixtures load")
}

pub fn algebra(ws: &Workspace, name: &str) -> Arc<GAlgebra> {
    ws.algebras().find(|(n, _)| *n == name).map(|(_, a)| a.clone()).unwrap_or_else(|| panic!("no algebra {name}"))
}

fn permutation_matrix(perm: &[usize]) -> QMatrix {
    let n = perm.len();
    QMatrix::from_fn(n, n, |i, j| if perm[j] == i { Scalar::one() } else { Scalar::zero() })
}

/// A direct sum of one or two pieces, each the trivial or the regular representation.
pub fn random_rep(rng: &mut ChaCha8Rng, group: &FiniteGroup) -> Vec<QMatrix> {
    let pieces = rng.gen_range(1..=2);
    let mut rep: Option<Vec<QMatrix>> = None;
    for _ in 0..pieces {
        let regular = group.order() > 1 && rng.gen_bool(0.5);
        let piece: Vec<QMatrix> = group
            .elements()
            .map(|g| if regular { permutation_matrix(&group.regular_permutation(g)) } else { QMatrix::identity(1) })
            .collect();
        rep = Some(match rep {
            None => piece,
            Some(r) => r.iter().zip(&piece).map(|(a, b)| a.direct_sum(b)).collect(),
        });
    }
    rep.expect("at least one piece")
}

fn conj_transpose(m: &QMatrix) -> QMatrix {
    m.transpose().map(|x| x.conj())
}

/// An idempotent commuting with every R_g: the G-average of a projection onto
/// the span of the orbits of a few random vectors.
pub fn invariant_idempotent(rng: &mut ChaCha8Rng, reps: &[QMatrix], inv: &[QMatrix]) -> QMatrix {
    let d = reps[0].rows();
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for _ in 0..rng.gen_range(0..=2usize) {
        let v: Vec<Scalar> = (0..d).map(|_| Scalar::int(rng.gen_range(-2..=2))).collect();
        cols.extend(reps.iter().map(|r| r.mul_vec(&v)));
    }
    if cols.is_empty() || d == 0 {
        return QMatrix::zeros(d, d);
    }
    let basis = QMatrix::from_columns(d, &QMatrix::from_columns(d, &cols).column_basis());
    if basis.cols() == 0 {
        return QMatrix::zeros(d, d);
    }
    let star = conj_transpose(&basis);
    let q = basis.mul(&star.mul(&basis).inverse().expect("Gram matrix is positive definite")).mul(&star);
    let mut acc = QMatrix::zeros(d, d);
    for (r, ri) in reps.iter().zip(inv) {
        acc = acc.add(&r.mul(&q).mul(ri));
    }
    acc.scale(&Scalar::from(Rational::new(1, reps.len() as i64)))
}

/// A random S₁ element over a unital algebra with a presentation.
pub fn random_s1(rng: &mut ChaCha8Rng, oracle: &Oracle) -> S1Element {
    let b = oracle.algebra().clone();
    let group = b.group().clone();
    let pres = oracle.presentation();
    let u = random_rep(rng, &group);
    let n = u[0].rows();
    let block_rep = |k: usize| -> (Vec<QMatrix>, Vec<QMatrix>) {
        let r = group.elements().map(|g| oracle.ambient_rep(&u, k, g)).collect();
        let i = group.elements().map(|g| oracle.ambient_rep(&u, k, group.inv(g))).collect();
        (r, i)
    };
    let scalar = {
        let (r, i) = block_rep(pres.blocks.len());
        invariant_idempotent(rng, &r, &i)
    };
    let make = |rng: &mut ChaCha8Rng| {
        let mut blocks: Vec<QMatrix> = (0..pres.blocks.len())
            .map(|k| {
                let (r, i) = block_rep(k);
                invariant_idempotent(rng, &r, &i)
            })
            .collect();
        blocks.push(scalar.clone());
        AlgMatrix::from_blocks(&b, pres, n, &blocks)
    };
    let plus = make(rng);
    let minus = make(rng);
    S1Element::new(&b, plus, minus, u).expect("random element is valid")
}

/// A random trivial element p∇p.
pub fn random_trivial(rng: &mut ChaCha8Rng, oracle: &Oracle) -> S1Element {
    let z = random_s1(rng, oracle);
    S1Element::trivial(oracle.algebra(), z.plus().clone(), z.rep().to_vec()).expect("trivial element is valid")
}

/// Per block and group element, tr(R_g (P₊ − P₋)): the virtual character
/// of the element, computed without the oracle's decomposition.
pub fn trace_character(oracle: &Oracle, z: &S1Element) -> Vec<Vec<Scalar>> {
    let pres = oracle.presentation();
    let group = oracle.algebra().group();
    (0..pres.blocks.len())
        .map(|k| {
            let diff = z.plus().block(pres, k).sub(&z.minus().block(pres, k));
            group.elements().map(|g| oracle.ambient_rep(z.rep(), k, g).mul(&diff).trace()).collect()
        })
        .collect()
}

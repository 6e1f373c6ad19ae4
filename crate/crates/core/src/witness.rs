//! Explicit homotopy chains between S₁ elements with equal classes.
//!
//! For x = (P₊, P₋) and y = (Q₊, Q₋) with equal keys, E = P₊ ⊕ Q₋ and
//! F = P₋ ⊕ Q₊ are equivariantly Murray–von Neumann equivalent block by
//! block. An intertwiner a: im E → im F with inverse b gives the involution
//! Z = [[1 − E, b], [a, 1 − F]] taking E ⊕ 0 to 0 ⊕ F; the path
//! Π₊ + (c + is)² Π₋ with Π± = (1 ± Z)/2 joins 1 to Z.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amatrix::AlgMatrix;
use crate::error::Error;
use crate::ktheory::{average, class_with};
use crate::levelone::S1Element;
use crate::matrix::Matrix;
use crate::oracle::Oracle;
use crate::path::{Endpoint, PathRing};
use crate::rational::Rational;
use crate::scalar::Scalar;
use crate::QMatrix;

#[derive(Clone, Debug)]
pub enum Move {
    /// Appends the trivial element p∇p carrying `rep`.
    AddTrivial { p: AlgMatrix<Scalar>, rep: Vec<QMatrix> },
    /// Removes the last `size` coordinates, which must form a decoupled trivial summand.
    RemoveTrivial { size: usize },
    /// Follows a path of S₁ elements over the path ring.
    Homotopy { plus: AlgMatrix<PathRing>, minus: AlgMatrix<PathRing> },
    /// Reorders coordinates: new coordinate i is old coordinate `order[i]`.
    Relabel { order: Vec<usize> },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::AddTrivial { p, .. } => write!(f, "add trivial summand of size {}", p.size()),
            Move::RemoveTrivial { size } => write!(f, "remove trivial summand of size {size}"),
            Move::Homotopy { plus, .. } => write!(f, "homotopy in size {}", plus.size()),
            Move::Relabel { order } => write!(f, "relabel {} coordinates", order.len()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HomotopyWitness {
    pub start: S1Element,
    pub end: S1Element,
    pub moves: Vec<Move>,
}

fn breach(what: String) -> Error {
    Error::Internal(format!("witness replay: {what}"))
}

fn lift_matrix(m: &QMatrix) -> Matrix<PathRing> {
    m.map(|x| PathRing::constant(x.clone()))
}

fn inverses(x: &S1Element, rep: &[QMatrix]) -> Vec<QMatrix> {
    let g = x.target().group();
    g.elements().map(|h| rep[g.inv(h)].clone()).collect()
}

impl HomotopyWitness {
    /// Replays every move, checking each path symbolically.
    pub fn verify(&self, oracle: &Oracle) -> Result<(), Error> {
        let mut state = self.start.clone();
        let pres = oracle.presentation();
        for (step, mv) in self.moves.iter().enumerate() {
            state = match mv {
                Move::AddTrivial { p, rep } => {
                    let t = S1Element::trivial(state.target(), p.clone(), rep.clone()).map_err(|e| breach(format!("step {step}: {e}")))?;
                    state.direct_sum(&t)?
                }
                Move::RemoveTrivial { size } => {
                    let n = state.size();
                    if *size > n {
                        return Err(breach(format!("step {step}: removing {size} of {n} coordinates")));
                    }
                    let (head, tail): (Vec<usize>, Vec<usize>) = ((0..n - size).collect(), (n - size..n).collect());
                    let coupled = head.iter().any(|&i| {
                        tail.iter().any(|&j| {
                            [state.plus(), state.minus()].iter().any(|m| !m.entry_is_zero(i, j) || !m.entry_is_zero(j, i))
                                || state.rep().iter().any(|u| !u.get(i, j).is_zero() || !u.get(j, i).is_zero())
                        })
                    });
                    let t = state.restrict(&tail);
                    if coupled || t.plus() != t.minus() {
                        return Err(breach(format!("step {step}: removed summand is not a decoupled trivial element")));
                    }
                    state.restrict(&head)
                }
                Move::Relabel { order } => {
                    let mut seen = order.clone();
                    seen.sort_unstable();
                    if seen != (0..state.size()).collect::<Vec<_>>() {
                        return Err(breach(format!("step {step}: relabelling is not a permutation")));
                    }
                    state.restrict(order)
                }
                Move::Homotopy { plus, minus } => {
                    if plus.at(Endpoint::Start) != *state.plus() || minus.at(Endpoint::Start) != *state.minus() {
                        return Err(breach(format!("step {step}: path does not start at the current element")));
                    }
                    if plus.scalar_part() != minus.scalar_part() {
                        return Err(breach(format!("step {step}: scalar parts move apart along the path")));
                    }
                    for m in [plus, minus] {
                        let constant = m.coords().iter().all(PathRing::is_constant);
                        for k in 0..=pres.blocks.len() {
                            let idempotent = if constant {
                                let b = m.at(Endpoint::Start).block(pres, k);
                                b.mul(&b) == b
                            } else {
                                let b = m.block(pres, k);
                                b.mul(&b) == b
                            };
                            if !idempotent {
                                return Err(breach(format!("step {step}: path is not idempotent in block {k}")));
                            }
                        }
                        let rep = state.rep();
                        let inv = inverses(&state, rep);
                        if !m.is_invariant(rep, &inv) {
                            return Err(breach(format!("step {step}: path is not invariant")));
                        }
                    }
                    S1Element::from_parts(state.target(), plus.at(Endpoint::End), minus.at(Endpoint::End), state.rep().to_vec(), state.rep_inv().to_vec())
                }
            };
        }
        if state != self.end {
            return Err(breach("chain does not end at the second element".into()));
        }
        Ok(())
    }
}

/// (c + i s)²  or (c − i s)² = 1 − 2s² ± 2i cs.
fn phase_squared(sign: i64) -> PathRing {
    PathRing::one() + PathRing::term(Scalar::int(-2), 0, 2) + PathRing::term(Scalar::gaussian(0, 2 * sign), 1, 1)
}

/// Per-block intertwiner a = F a E of full rank and its inverse b.
fn intertwiners(e: &QMatrix, f: &QMatrix, reps: &[QMatrix], inv: &[QMatrix], rng: &mut ChaCha8Rng) -> Result<(QMatrix, QMatrix), Error> {
    let d = e.rows();
    let r = e.rank();
    if f.rank() != r {
        return Err(Error::Internal(format!("blocks of rank {r} and {} have equal characters", f.rank())));
    }
    if r == 0 {
        return Ok((QMatrix::zeros(d, d), QMatrix::zeros(d, d)));
    }
    for _ in 0..16 {
        let x = QMatrix::from_fn(d, d, |_, _| Scalar::int(rng.gen_range(-2..=2)));
        let a = average(reps, inv, &f.mul(&x).mul(e));
        if a.rank() != r {
            continue;
        }
        let ce = QMatrix::from_columns(d, &e.column_basis());
        let kf = QMatrix::from_columns(d, &QMatrix::identity(d).sub(f).column_basis());
        let frame = a.mul(&ce).hstack(&kf);
        let Some(frame_inv) = frame.inverse() else { continue };
        let b = ce.hstack(&QMatrix::zeros(d, d - r)).mul(&frame_inv);
        if b.mul(&a) == *e && a.mul(&b) == *f {
            return Ok((a, b));
        }
    }
    Err(Error::Internal("no equivariant partial isometry found between equal-class blocks".into()))
}

fn quadrants<R: crate::field::Ring>(a: &Matrix<R>, b: &Matrix<R>, c: &Matrix<R>, d: &Matrix<R>) -> Matrix<R> {
    a.hstack(b).vstack(&c.hstack(d))
}

/// Builds a chain from x to y, to be replayed with `verify`; the classes must be equal.
pub fn homotopy_witness(oracle: &Oracle, x: &S1Element, y: &S1Element) -> Result<HomotopyWitness, Error> {
    let kx = class_with(oracle, x)?;
    let ky = class_with(oracle, y)?;
    if kx.key() != ky.key() {
        return Err(Error::Workspace("no witness: the classes differ".into()));
    }
    let done = |moves: Vec<Move>| -> Result<HomotopyWitness, Error> {
        let w = HomotopyWitness { start: x.clone(), end: y.clone(), moves };
        w.verify(oracle)?;
        Ok(w)
    };
    if x == y {
        return done(Vec::new());
    }
    let (n, m) = (x.size(), y.size());
    if m > n && y.restrict(&(0..n).collect::<Vec<_>>()) == *x {
        let tail = y.restrict(&(n..m).collect::<Vec<_>>());
        if tail.plus() == tail.minus() {
            let candidate = done(vec![Move::AddTrivial { p: tail.plus().clone(), rep: tail.rep().to_vec() }]);
            if candidate.is_ok() {
                return candidate;
            }
        }
    }

    let (moves, cx) = strip_trivial(x);
    let (unstrip, cy) = restore_trivial(y);
    let mut moves = moves;
    if cx != cy {
        moves.extend(core_chain(oracle, &cx, &cy)?);
    }
    moves.extend(unstrip);
    Ok(HomotopyWitness { start: x.clone(), end: y.clone(), moves })
}

/// Split a coordinate set into nontrivial components and the rest.
fn trivial_split(x: &S1Element) -> (Vec<usize>, Vec<usize>) {
    let mut keep = Vec::new();
    let mut drop = Vec::new();
    for c in x.components() {
        if x.plus().restrict(&c) == x.minus().restrict(&c) {
            drop.extend(c);
        } else {
            keep.extend(c);
        }
    }
    keep.sort_unstable();
    drop.sort_unstable();
    (keep, drop)
}

/// Moves taking x to its compaction, and the compaction.
fn strip_trivial(x: &S1Element) -> (Vec<Move>, S1Element) {
    let (keep, drop) = trivial_split(x);
    if drop.is_empty() {
        return (Vec::new(), x.clone());
    }
    let order: Vec<usize> = keep.iter().chain(&drop).copied().collect();
    let moves = vec![Move::Relabel { order }, Move::RemoveTrivial { size: drop.len() }];
    (moves, x.restrict(&keep))
}

/// Moves taking the compaction of y back to y, and the compaction.
fn restore_trivial(y: &S1Element) -> (Vec<Move>, S1Element) {
    let (keep, drop) = trivial_split(y);
    if drop.is_empty() {
        return (Vec::new(), y.clone());
    }
    let tail = y.restrict(&drop);
    let order: Vec<usize> = keep.iter().chain(&drop).copied().collect();
    let mut back = vec![0; order.len()];
    for (i, &j) in order.iter().enumerate() {
        back[j] = i;
    }
    let moves = vec![Move::AddTrivial { p: tail.plus().clone(), rep: tail.rep().to_vec() }, Move::Relabel { order: back }];
    (moves, y.restrict(&keep))
}

/// The Murray-von Neumann twist and rotation joining two elements of equal class.
fn core_chain(oracle: &Oracle, x: &S1Element, y: &S1Element) -> Result<Vec<Move>, Error> {
    let (n, m) = (x.size(), y.size());
    let b = x.target();
    let pres = oracle.presentation();
    let group = b.group();
    let size = n + m;
    let e = x.plus().direct_sum(y.minus());
    let f = x.minus().direct_sum(y.plus());
    let g = x.minus().direct_sum(y.minus());
    let rep: Vec<QMatrix> = x.rep().iter().zip(y.rep()).map(|(a, c)| a.direct_sum(c)).collect();
    let zeros = AlgMatrix::<Scalar>::zeros(b, size);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let blocks = pres.blocks.len();
    let mut twist = Vec::with_capacity(blocks + 1);
    let mut twist_inv = Vec::with_capacity(blocks + 1);
    let mut rotation = Vec::with_capacity(blocks + 1);
    let mut rotation_inv = Vec::with_capacity(blocks + 1);
    let half = Scalar::from(Rational::new(1, 2));
    for k in 0..blocks {
        let (ek, fk) = (e.block(pres, k), f.block(pres, k));
        let reps: Vec<QMatrix> = group.elements().map(|h| oracle.ambient_rep(&rep, k, h)).collect();
        let inv: Vec<QMatrix> = group.elements().map(|h| oracle.ambient_rep(&rep, k, group.inv(h))).collect();
        let (a, bb) = intertwiners(&ek, &fk, &reps, &inv, &mut rng)?;
        let d = ek.rows();
        let id = QMatrix::identity(d);
        let z = quadrants(&id.sub(&ek), &bb, &a, &id.sub(&fk));
        let id2 = QMatrix::identity(2 * d);
        let pi_plus = lift_matrix(&id2.add(&z).scale(&half));
        let pi_minus = lift_matrix(&id2.sub(&z).scale(&half));
        twist.push(pi_plus.add(&pi_minus.scale(&phase_squared(1))));
        twist_inv.push(pi_plus.add(&pi_minus.scale(&phase_squared(-1))));
        let (c, s) = (lift_matrix(&id).scale(&PathRing::c()), lift_matrix(&id).scale(&PathRing::s()));
        rotation.push(quadrants(&c, &s.neg(), &s, &c));
        rotation_inv.push(quadrants(&c, &s, &s.neg(), &c));
    }
    let id_scalar = Matrix::<PathRing>::identity(2 * size);
    for list in [&mut twist, &mut twist_inv, &mut rotation, &mut rotation_inv] {
        list.push(id_scalar.clone());
    }
    let conjugate = |start: &AlgMatrix<Scalar>, w: &[Matrix<PathRing>], w_inv: &[Matrix<PathRing>]| -> AlgMatrix<PathRing> {
        let lifted = start.lift();
        let parts: Vec<Matrix<PathRing>> = (0..=blocks).map(|k| w[k].mul(&lifted.block(pres, k)).mul(&w_inv[k])).collect();
        AlgMatrix::from_blocks(b, pres, 2 * size, &parts)
    };
    let start_plus = e.direct_sum(&zeros);
    let minus_path = g.direct_sum(&zeros).lift();
    let twisted = conjugate(&start_plus, &twist, &twist_inv);
    let rotated = conjugate(&twisted.at(Endpoint::End), &rotation, &rotation_inv);

    let order: Vec<usize> = (n..size).chain(0..n).collect();
    let moves = vec![
        Move::AddTrivial { p: y.minus().clone(), rep: y.rep().to_vec() },
        Move::AddTrivial { p: zeros.clone(), rep: rep.clone() },
        Move::Homotopy { plus: twisted, minus: minus_path.clone() },
        Move::Homotopy { plus: rotated, minus: minus_path },
        Move::RemoveTrivial { size },
        Move::Relabel { order },
        Move::RemoveTrivial { size: n },
    ];
    Ok(moves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{trivial_rep, GAlgebra};
    use crate::group::FiniteGroup;
    use std::sync::Arc;

    fn m2() -> Arc<GAlgebra> {
        let g = Arc::new(FiniteGroup::trivial());
        let c = GAlgebra::complex(g.clone());
        Arc::new(GAlgebra::matrix_algebra("M2", 2, &c, &trivial_rep(&g, 2)).unwrap())
    }

    fn unit_entry(b: &Arc<GAlgebra>, basis: usize) -> S1Element {
        let mut p = AlgMatrix::zeros(b, 1);
        p.entry_mut(0, 0)[basis] = Scalar::one();
        S1Element::new(b, p, AlgMatrix::zeros(b, 1), trivial_rep(b.group(), 1)).unwrap()
    }

    #[test]
    fn equal_elements_need_no_moves() {
        let b = m2();
        let o = Oracle::new(&b).unwrap();
        let x = unit_entry(&b, 0);
        assert!(homotopy_witness(&o, &x, &x).unwrap().moves.is_empty());
    }

    #[test]
    fn padding_is_one_move() {
        let b = m2();
        let o = Oracle::new(&b).unwrap();
        let x = unit_entry(&b, 0);
        assert_eq!(homotopy_witness(&o, &x, &x.pad(2)).unwrap().moves.len(), 1);
    }

    #[test]
    fn e11_and_e22_are_joined() {
        let b = m2();
        let o = Oracle::new(&b).unwrap();
        let w = homotopy_witness(&o, &unit_entry(&b, 0), &unit_entry(&b, 3)).unwrap();
        w.verify(&o).unwrap();
    }

    #[test]
    fn tampered_chain_is_rejected() {
        let b = m2();
        let o = Oracle::new(&b).unwrap();
        let mut w = homotopy_witness(&o, &unit_entry(&b, 0), &unit_entry(&b, 3)).unwrap();
        w.end = unit_entry(&b, 0);
        assert!(w.verify(&o).is_err());
    }

    #[test]
    fn different_classes_have_no_witness() {
        let b = m2();
        let o = Oracle::new(&b).unwrap();
        let x = unit_entry(&b, 0);
        assert!(homotopy_witness(&o, &x, &x.direct_sum(&x).unwrap()).is_err());
    }
}

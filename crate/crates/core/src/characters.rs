//! Q(i)-rational irreducible characters of a finite group.
//!
//! The Q(i)-valued class functions span a split commutative subalgebra of
//! the centre of Q(i)G; its primitive idempotents are the primitive central
//! idempotents of Q(i)G. Each one yields the sum ψ of a Galois orbit of
//! complex irreducible characters.

use num_traits::{One, Zero};

use crate::error::Indeterminate;
use crate::field::{Field, Ring};
use crate::group::FiniteGroup;
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Element of the group algebra, indexed by group element.
pub type GroupAlgebraElement = Vec<Scalar>;

#[derive(Clone, Debug, PartialEq)]
pub struct Irreducible {
    /// ψ evaluated on each conjugacy class.
    pub values: Vec<Scalar>,
    /// Degree of each complex constituent.
    pub degree: usize,
    /// Number of Galois-conjugate complex constituents.
    pub orbit: usize,
    /// Central idempotent of Q(i)G cutting out this component.
    pub idempotent: GroupAlgebraElement,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group: FiniteGroup,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub irreducibles: Vec<Irreducible>,
}

pub fn convolve(g: &FiniteGroup, a: &[Scalar], b: &[Scalar]) -> GroupAlgebraElement {
    let mut out = vec![Scalar::zero(); g.order()];
    for (x, ax) in a.iter().enumerate() {
        if ax.is_zero() {
            continue;
        }
        for (y, by) in b.iter().enumerate() {
            if !by.is_zero() {
                out[g.mul(x, y)].add_mul(ax, by);
            }
        }
    }
    out
}

fn rational_classes(g: &FiniteGroup, classes: &[Vec<usize>], class_of: &[usize]) -> Vec<Vec<usize>> {
    let m = num_integer::lcm(g.exponent(), 4);
    let galois: Vec<usize> = (1..m).filter(|&k| num_integer::gcd(k, m) == 1 && k % 4 == 1).collect();
    let mut label = vec![usize::MAX; classes.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (c, class) in classes.iter().enumerate() {
        if label[c] != usize::MAX {
            continue;
        }
        let rep = class[0];
        let mut members: Vec<usize> = galois.iter().map(|&k| class_of[g.pow(rep, k)]).collect();
        members.sort_unstable();
        members.dedup();
        let id = out.len();
        let mut elems = Vec::new();
        for &mc in &members {
            label[mc] = id;
            elems.extend(classes[mc].iter().copied());
        }
        elems.sort_unstable();
        out.push(elems);
    }
    out
}

fn indicator(g: &FiniteGroup, elems: &[usize]) -> GroupAlgebraElement {
    let mut v = vec![Scalar::zero(); g.order()];
    for &x in elems {
        v[x] = Scalar::one();
    }
    v
}

/// Eigenvalue candidates: Gaussian integers in the box |re|, |im| ≤ bound.
fn gaussian_box(bound: i64) -> impl Iterator<Item = Scalar> {
    (-bound..=bound).flat_map(move |a| (-bound..=bound).map(move |b| Scalar::gaussian(a, b)))
}

impl CharacterTable {
    pub fn new(group: &FiniteGroup) -> Result<CharacterTable, Indeterminate> {
        let n = group.order();
        let classes = group.conjugacy_classes();
        let mut class_of = vec![0; n];
        for (c, class) in classes.iter().enumerate() {
            for &x in class {
                class_of[x] = c;
            }
        }
        let rclasses = rational_classes(group, &classes, &class_of);
        let r = rclasses.len();
        let sums: Vec<GroupAlgebraElement> = rclasses.iter().map(|c| indicator(group, c)).collect();

        // Coordinates in the rational class-sum basis: a class function is
        // read off at the first member of each rational class.
        let coords = |v: &GroupAlgebraElement| -> Vec<Scalar> {
            rclasses.iter().map(|c| v[c[0]].clone()).collect()
        };
        let mult_matrix = |j: usize| -> Matrix<Scalar> {
            let cols: Vec<Vec<Scalar>> =
                (0..r).map(|k| coords(&convolve(group, &sums[j], &sums[k]))).collect();
            Matrix::from_columns(r, &cols)
        };

        let mut spaces: Vec<Matrix<Scalar>> = vec![Matrix::identity(r)];
        for (j, class) in rclasses.iter().enumerate() {
            let l = mult_matrix(j);
            let bound = class.len() as i64;
            let mut next = Vec::new();
            for basis in &spaces {
                let mut found = 0;
                for lambda in gaussian_box(bound) {
                    let shifted = l.sub(&Matrix::identity(r).scale(&lambda)).mul(basis);
                    let ns = shifted.nullspace();
                    if ns.is_empty() {
                        continue;
                    }
                    found += ns.len();
                    next.push(basis.mul(&Matrix::from_columns(basis.cols(), &ns)));
                    if found == basis.cols() {
                        break;
                    }
                }
                if found != basis.cols() {
                    return Err(Indeterminate::Characters(format!(
                        "class sum {j} of {} has eigenvalues outside Z[i]",
                        group.name()
                    )));
                }
            }
            spaces = next;
        }
        if spaces.iter().any(|s| s.cols() != 1) || spaces.len() != r {
            return Err(Indeterminate::Characters("joint eigenspaces are not one-dimensional".into()));
        }

        let nq = Scalar::int(n as i64);
        let class_sums: Vec<GroupAlgebraElement> = classes.iter().map(|c| indicator(group, c)).collect();
        let mut irreducibles = Vec::with_capacity(r);
        for s in &spaces {
            let mut e = vec![Scalar::zero(); n];
            for (k, c) in rclasses.iter().enumerate() {
                for &x in c {
                    e[x] = s.get(k, 0).clone();
                }
            }
            let sq = convolve(group, &e, &e);
            let pos = (0..n).find(|&x| !e[x].is_zero()).expect("nonzero eigenvector");
            let mu = sq[pos].div_ref(&e[pos]).ok_or_else(|| Indeterminate::Characters("nilpotent vector".into()))?;
            let mu_inv = Field::inv(&mu).ok_or_else(|| Indeterminate::Characters("nilpotent vector".into()))?;
            let e: GroupAlgebraElement = e.iter().map(|x| x.mul_ref(&mu_inv)).collect();
            let orbit = Matrix::from_columns(n, &class_sums.iter().map(|c| convolve(group, &e, c)).collect::<Vec<_>>()).rank();
            let c1 = e[group.identity()].mul_ref(&nq).scale(&Rational::new(1, orbit as i64));
            let degree = c1
                .as_integer()
                .and_then(|v| Rational::from_integer(v).exact_sqrt())
                .and_then(|v| v.to_i64())
                .ok_or_else(|| Indeterminate::Characters(format!("non-square degree datum {c1}")))?
                as usize;
            let scale = nq.scale(&Rational::new(1, degree as i64));
            let values = classes.iter().map(|c| e[group.inv(c[0])].mul_ref(&scale)).collect();
            irreducibles.push(Irreducible { values, degree, orbit, idempotent: e });
        }
        irreducibles.sort_by_key(|ir| {
            let trivial = ir.values.iter().all(|v| v.is_one());
            (!trivial, ir.degree * ir.orbit, format!("{:?}", ir.values))
        });
        Ok(CharacterTable { group: group.clone(), classes, class_of, irreducibles })
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    /// ⟨a, b⟩ = |G|⁻¹ Σ_g a(g) b(g⁻¹), for class functions given per class.
    pub fn inner(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for g in self.group.elements() {
            acc.add_mul(&a[self.class_of[g]], &b[self.class_of[self.group.inv(g)]]);
        }
        acc.scale(&Rational::new(1, self.group.order() as i64))
    }

    /// Integer multiplicities of each irreducible in a virtual character.
    pub fn multiplicities(&self, chi: &[Scalar]) -> Result<Vec<i64>, Indeterminate> {
        self.irreducibles
            .iter()
            .map(|ir| {
                let m = self
                    .inner(chi, &ir.values)
                    .scale(&Rational::new(1, ir.orbit as i64));
                m.as_integer().ok_or_else(|| {
                    Indeterminate::Characters(format!("non-integral multiplicity {m}"))
                })
            })
            .collect()
    }
}

/// Per-class character of a matrix representation restricted by `trace_of`.
pub fn class_function(table: &CharacterTable, trace_of: impl Fn(usize) -> Scalar) -> Vec<Scalar> {
    table.classes.iter().map(|c| trace_of(c[0])).collect()
}

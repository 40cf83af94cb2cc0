//! Paths in a quiver and the bound quiver algebra `kQ/I`.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;

use crate::algebra::{to_sparse, FiniteDimAlgebra, Generator, SubalgebraEmbedding, Vertex};
use crate::error::AlgebraError;
use crate::field::Field;
use crate::linalg::{add_scaled_vec, is_zero_vec, Subspace};
use crate::presentation::{word_to_string, Letter, LinearExpr, Presentation, Quiver};

/// A path, stored function-style: `arrows[0]` is traversed last. The trivial
/// path at `v` has no arrows and `source == target == v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

#[allow(clippy::len_without_is_empty)]
impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self * other`: first `other`, then `self`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.source != other.target {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path { source: other.source, target: self.target, arrows })
    }

    pub fn from_letters(q: &Quiver, word: &[Letter]) -> Option<Path> {
        let mut acc: Option<Path> = None;
        for l in word.iter().rev() {
            let p = match *l {
                Letter::Vertex(v) => Path::trivial(v),
                Letter::Arrow(a) => Path { source: q.arrows[a].source, target: q.arrows[a].target, arrows: vec![a] },
            };
            acc = Some(match acc {
                None => p,
                Some(prev) => p.compose(&prev)?,
            });
        }
        acc
    }

    pub fn name(&self, q: &Quiver) -> String {
        if self.is_trivial() {
            format!("e{}", q.vertices[self.source])
        } else {
            self.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
        }
    }
}

/// All paths of length `0..=max_len`, grouped by length. Within a length the
/// order is lexicographic in arrow declaration order, reading the word from
/// left to right; length 0 lists the vertices in order.
pub fn enumerate_paths(q: &Quiver, max_len: usize) -> Vec<Vec<Path>> {
    let mut by_len: Vec<Vec<Path>> = vec![(0..q.vertices.len()).map(Path::trivial).collect()];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for (a, arrow) in q.arrows.iter().enumerate() {
            let head = Path { source: arrow.source, target: arrow.target, arrows: vec![a] };
            if len == 1 {
                next.push(head);
                continue;
            }
            for rest in &by_len[len - 1] {
                if let Some(p) = head.compose(rest) {
                    next.push(p);
                }
            }
        }
        by_len.push(next);
    }
    by_len
}

/// `kQ/I` with its path basis and normal-form reduction.
#[derive(Debug)]
pub struct BoundQuiverAlgebra<F: Field> {
    quiver: Quiver,
    cap: usize,
    algebra: Arc<FiniteDimAlgebra<F>>,
    basis_paths: Vec<Path>,
    /// Every path of length at most `cap`, mapped to its elimination column.
    columns: HashMap<Path, usize>,
    ideal: Subspace<F>,
    /// Elimination column of each basis path.
    basis_columns: Vec<usize>,
}

impl<F: Field> BoundQuiverAlgebra<F> {
    pub fn build(field: &F, pres: &Presentation) -> Result<Self, AlgebraError> {
        let q = &pres.quiver;
        let cap = pres.cap;
        let paths: Vec<Path> = enumerate_paths(q, cap).into_iter().flatten().collect();
        let total = paths.len();
        // Longer paths, and later paths within a length, get smaller column
        // indices so that elimination pivots on them and shorter / earlier
        // paths survive as normal forms.
        let columns: HashMap<Path, usize> =
            paths.iter().enumerate().map(|(i, p)| (p.clone(), total - 1 - i)).collect();

        let relations: Vec<Vec<(F::Elem, Path)>> = pres
            .relations
            .iter()
            .map(|r| convert_terms(field, q, r))
            .collect::<Result<_, _>>()?;

        let by_target: Vec<Vec<&Path>> = (0..q.vertices.len())
            .map(|v| paths.iter().filter(|p| p.target == v).collect())
            .collect();
        let by_source: Vec<Vec<&Path>> = (0..q.vertices.len())
            .map(|v| paths.iter().filter(|p| p.source == v).collect())
            .collect();

        let mut ideal = Subspace::new(field, total);
        for rel in &relations {
            let (src, tgt) = (rel[0].1.source, rel[0].1.target);
            let min_len = rel.iter().map(|(_, p)| p.len()).min().unwrap_or(0);
            for u in &by_source[tgt] {
                if u.len() + min_len > cap {
                    continue;
                }
                for v in &by_target[src] {
                    if u.len() + min_len + v.len() > cap {
                        continue;
                    }
                    let mut vec = vec![field.zero(); total];
                    for (c, p) in rel {
                        let w = u.compose(p).and_then(|up| up.compose(v)).expect("composable");
                        if let Some(&col) = columns.get(&w) {
                            vec[col] = field.add(&vec[col], c);
                        }
                    }
                    ideal.insert(vec);
                }
            }
        }

        // Every path of length `cap` must vanish.
        for p in paths.iter().filter(|p| p.len() == cap) {
            let mut v = vec![field.zero(); total];
            v[columns[p]] = field.one();
            if !ideal.contains(&v) {
                return Err(AlgebraError::NotAdmissible { witness: p.name(q), cap });
            }
        }

        let mut basis_columns = ideal.free_columns();
        basis_columns.reverse();
        let basis_paths: Vec<Path> = basis_columns.iter().map(|&c| paths[total - 1 - c].clone()).collect();
        let n = basis_paths.len();
        let p = field.spec().characteristic();
        if p != 0 && p as usize <= n {
            return Err(AlgebraError::FieldTooSmall { characteristic: p, dim: n });
        }

        let mut bqa = BoundQuiverAlgebra {
            quiver: q.clone(),
            cap,
            algebra: Arc::new(FiniteDimAlgebra::from_sparse(field, Vec::new(), Vec::new(), Vec::new())),
            basis_paths,
            columns,
            ideal,
            basis_columns,
        };

        let mut table = Vec::with_capacity(n * n);
        for a in &bqa.basis_paths {
            for b in &bqa.basis_paths {
                let prod = match a.compose(b) {
                    Some(p) => bqa.path_element(&p),
                    None => vec![field.zero(); n],
                };
                table.push(to_sparse(field, &prod));
            }
        }
        let labels: Vec<String> = bqa.basis_paths.iter().map(|p| p.name(q)).collect();
        let nv = q.vertices.len();
        let vertex_elems: Vec<Vec<F::Elem>> = (0..nv).map(|v| bqa.path_element(&Path::trivial(v))).collect();
        let mut unit = vec![field.zero(); n];
        for e in &vertex_elems {
            add_scaled_vec(field, &mut unit, &field.one(), e);
        }
        let mut generators: Vec<Generator<F>> = q
            .vertices
            .iter()
            .zip(&vertex_elems)
            .map(|(name, e)| Generator { label: name.clone(), element: e.clone() })
            .collect();
        for (a, arrow) in q.arrows.iter().enumerate() {
            let p = Path { source: arrow.source, target: arrow.target, arrows: vec![a] };
            generators.push(Generator { label: arrow.name.clone(), element: bqa.path_element(&p) });
        }
        let words: Vec<Vec<usize>> = bqa
            .basis_paths
            .iter()
            .map(|p| if p.is_trivial() { vec![p.source] } else { p.arrows.iter().map(|a| nv + a).collect() })
            .collect();
        let vertices = q
            .vertices
            .iter()
            .zip(vertex_elems)
            .map(|(name, e)| Vertex { label: name.clone(), idempotent: e })
            .collect();
        let alg = FiniteDimAlgebra::from_sparse(field, labels, table, unit)
            .with_generators(generators, words)?
            .with_vertices(vertices)
            .with_monomial(pres.is_monomial());
        alg.check_associative()?;
        bqa.algebra = Arc::new(alg);
        Ok(bqa)
    }

    pub fn algebra(&self) -> &Arc<FiniteDimAlgebra<F>> {
        &self.algebra
    }
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }
    pub fn cap(&self) -> usize {
        self.cap
    }
    pub fn basis_paths(&self) -> &[Path] {
        &self.basis_paths
    }
    pub fn dim(&self) -> usize {
        self.basis_paths.len()
    }

    /// Coordinates of the image of a path in the normal-form basis.
    pub fn path_element(&self, p: &Path) -> Vec<F::Elem> {
        let f = self.ideal.field();
        let Some(&col) = self.columns.get(p) else {
            return vec![f.zero(); self.dim()];
        };
        let mut v = vec![f.zero(); self.ideal.ambient()];
        v[col] = f.one();
        self.ideal.quotient_coords(&v, &self.basis_columns)
    }

    /// Evaluate a linear combination of words in vertices and arrows.
    pub fn eval(&self, expr: &LinearExpr<Letter>) -> Result<Vec<F::Elem>, AlgebraError> {
        let f = self.algebra.field();
        let mut out = vec![f.zero(); self.dim()];
        for (c, p) in convert_terms(f, &self.quiver, expr)? {
            add_scaled_vec(f, &mut out, &c, &self.path_element(&p));
        }
        Ok(out)
    }

    /// Trivial paths, then arrows: the span of the arrows' images generates
    /// the radical.
    pub fn arrow_ideal(&self) -> Subspace<F> {
        let f = self.algebra.field();
        Subspace::from_vectors(
            f,
            self.dim(),
            self.basis_paths.iter().filter(|p| !p.is_trivial()).map(|p| self.path_element(p)),
        )
    }

    /// The subalgebra generated by the presentation's generators, after
    /// checking the declared subrelations.
    pub fn subalgebra(&self, pres: &Presentation, adjoin_unit: bool) -> Result<SubalgebraEmbedding<F>, AlgebraError> {
        let gens: Vec<Generator<F>> = pres
            .generators
            .iter()
            .map(|g| Ok(Generator { label: g.name.clone(), element: self.eval(&g.expr)? }))
            .collect::<Result<_, AlgebraError>>()?;
        let f = self.algebra.field();
        for rel in &pres.subrelations {
            let mut total = vec![f.zero(); self.dim()];
            for t in &rel.terms {
                let c = ratio(f, &t.coeff)?;
                let mut acc = self.algebra.unit().to_vec();
                for &g in &t.word {
                    acc = self.algebra.mul(&acc, &gens[g].element);
                }
                add_scaled_vec(f, &mut total, &c, &acc);
            }
            if !is_zero_vec(f, &total) {
                return Err(AlgebraError::Invalid(format!(
                    "subrelation on line {} does not vanish in the subalgebra",
                    rel.line
                )));
            }
        }
        self.algebra.subalgebra_closure(gens, adjoin_unit)
    }
}

fn ratio<F: Field>(f: &F, c: &BigRational) -> Result<F::Elem, AlgebraError> {
    f.from_ratio(c.numer(), c.denom())
        .ok_or_else(|| AlgebraError::Invalid(format!("coefficient {c} is not defined over {}", f.spec())))
}

fn convert_terms<F: Field>(f: &F, q: &Quiver, expr: &LinearExpr<Letter>) -> Result<Vec<(F::Elem, Path)>, AlgebraError> {
    expr.terms
        .iter()
        .map(|t| {
            let p = Path::from_letters(q, &t.word)
                .ok_or_else(|| AlgebraError::NonComposable(word_to_string(q, &t.word)))?;
            Ok((ratio(f, &t.coeff)?, p))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::presentation::parse_presentation;

    fn build(text: &str) -> Result<BoundQuiverAlgebra<PrimeField>, AlgebraError> {
        let pres = parse_presentation(text).unwrap();
        BoundQuiverAlgebra::build(&PrimeField::new(1009).unwrap(), &pres)
    }

    #[test]
    fn enumeration_small_cases() {
        let q = Quiver::new(vec!["v".into()], vec![]);
        let ps = enumerate_paths(&q, 3);
        assert_eq!(ps.iter().map(Vec::len).sum::<usize>(), 1);
        let q = parse_presentation("vertex v\narrow x: v -> v\ncap 2").unwrap().quiver;
        let ps: Vec<String> = enumerate_paths(&q, 2).into_iter().flatten().map(|p| p.name(&q)).collect();
        assert_eq!(ps, vec!["ev", "x", "x.x"]);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let q = parse_presentation("vertex 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\narrow c: 1 -> 1\ncap 2")
            .unwrap()
            .quiver;
        let len2: Vec<String> = enumerate_paths(&q, 2)[2].iter().map(|p| p.name(&q)).collect();
        assert_eq!(len2, vec!["a.b", "a.c", "b.a", "c.b", "c.c"]);
    }

    #[test]
    fn dual_numbers_basis() {
        let a = build("vertex v\narrow x: v -> v\nrelation x.x\ncap 2").unwrap();
        let names: Vec<String> = a.basis_paths().iter().map(|p| p.name(a.quiver())).collect();
        assert_eq!(names, vec!["ev", "x"]);
        let x = a.algebra().basis_vector(1);
        assert_eq!(a.algebra().mul(&x, &x), vec![0, 0]);
    }

    #[test]
    fn commutativity_relation_identifies_paths() {
        // Commutative square: b.a = d.c, so the long paths span one dimension.
        let text = "vertex 1 2 3 4\narrow a: 1 -> 2\narrow b: 2 -> 4\narrow c: 1 -> 3\narrow d: 3 -> 4\n\
                    relation b.a - d.c\ncap 3";
        let a = build(text).unwrap();
        assert_eq!(a.dim(), 4 + 4 + 1);
        assert!(!a.algebra().is_monomial());
        let pres = parse_presentation(text).unwrap();
        let ba = pres.relations[0].clone();
        assert_eq!(a.eval(&ba).unwrap(), vec![0; 9]);
        // the radical is the arrow ideal
        assert_eq!(*a.algebra().radical().unwrap(), a.arrow_ideal());
    }

    #[test]
    fn missing_relations_are_not_admissible() {
        let err = build("vertex v\narrow x: v -> v\ncap 3").unwrap_err();
        assert_eq!(err, AlgebraError::NotAdmissible { witness: "x.x.x".into(), cap: 3 });
    }

    #[test]
    fn small_characteristic_is_rejected() {
        let pres = parse_presentation("vertex v\narrow x: v -> v\nrelation x.x.x\ncap 3").unwrap();
        let err = BoundQuiverAlgebra::build(&PrimeField::new(3).unwrap(), &pres).unwrap_err();
        assert_eq!(err, AlgebraError::FieldTooSmall { characteristic: 3, dim: 3 });
        assert!(BoundQuiverAlgebra::build(&Rationals, &pres).is_ok());
    }

    #[test]
    fn trivial_paths_are_orthogonal_idempotents() {
        let a = build("vertex 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation a.b\nrelation b.a\ncap 2").unwrap();
        let alg = a.algebra();
        let vs = alg.primitive_idempotents().unwrap();
        assert_eq!(vs.len(), 2);
        assert!(alg.is_idempotent(&vs[0].idempotent));
        assert!(is_zero_vec(alg.field(), &alg.mul(&vs[0].idempotent, &vs[1].idempotent)));
    }
}

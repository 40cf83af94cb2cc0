//! Tensor products over an algebra and Tor.
//!
//! For a right `D`-module `X` and a left `D`-module `N` with minimal
//! resolution `P_•`, each `X (x)_D D e_v` is identified with `X e_v`, so
//! `X (x)_D P_k` is a sum of such pieces. A map `D e_a -> D e_b` is right
//! multiplication by some `y` in `e_a D e_b` and becomes `x -> x y`.

use std::sync::Arc;

use crate::algebra::{Expr, FiniteDimAlgebra};
use crate::error::AlgebraError;
use crate::field::Field;
use crate::linalg::{add_scaled_vec, Matrix, Subspace};
use crate::module::{minimal_resolution, LeftModule, ProjectiveSum, Resolution, Ring};

/// A module seen as a right module over some algebra `D`: generators
/// `offset..` of its ring act as `D`'s generators from the right. `op` is the
/// algebra whose left action realises the right action (`D^op`).
pub struct RightAction<'a, F: Field> {
    pub module: &'a LeftModule<F>,
    pub op: Arc<FiniteDimAlgebra<F>>,
    pub offset: usize,
}

impl<'a, F: Field> RightAction<'a, F> {
    /// A left module over `D^op` (offset 0), or a `(C, D)`-bimodule.
    pub fn of(module: &'a LeftModule<F>) -> Self {
        let ring = module.ring();
        match ring.tensor_factors() {
            Some((left, right_op)) => RightAction {
                module,
                op: Arc::clone(right_op.as_basic().expect("basic factor")),
                offset: left.num_generators(),
            },
            None => RightAction { module, op: Arc::clone(ring.as_basic().expect("basic ring")), offset: 0 },
        }
    }

    /// Right multiplication by an element of `D` (given in `D`'s basis).
    pub fn right_expr(&self, d: &[F::Elem]) -> Expr<F> {
        self.op.element_expr(d).shifted(self.offset)
    }

    pub fn act(&self, x: &[F::Elem], d: &[F::Elem]) -> Vec<F::Elem> {
        self.module.apply_expr(&self.right_expr(d), x)
    }

    fn left_generators(&self) -> usize {
        self.offset
    }
}

/// `X (x)_D P_•` for a resolution `P_•` of `N`.
pub struct TensorComplex<F: Field> {
    /// `X e_v` for every vertex `v` of `D`.
    pub pieces: Vec<Subspace<F>>,
    /// `dims[k] = dim X (x) P_k`.
    pub dims: Vec<usize>,
    /// `maps[k-1]: X (x) P_k -> X (x) P_{k-1}` for `k >= 1`.
    pub maps: Vec<Matrix<F>>,
    /// Offset of each summand block inside `X (x) P_k`.
    pub offsets: Vec<Vec<usize>>,
}

/// The element of `D` represented by block `s` of a vector in a sum of
/// projectives over a basic ring.
fn block_element<F: Field>(p: &ProjectiveSum<F>, s: usize, v: &[F::Elem]) -> Vec<F::Elem> {
    let ring = p.ring();
    let f = ring.field();
    let data = &ring.projectives().expect("projectives")[p.summands()[s]];
    let elements = data.elements.as_ref().expect("projectives over a basic ring");
    let d = ring.as_basic().expect("basic ring").dim();
    let mut y = vec![f.zero(); d];
    for (c, e) in p.block(s, v).iter().zip(elements) {
        if !f.is_zero(c) {
            add_scaled_vec(f, &mut y, c, e);
        }
    }
    y
}

impl<F: Field> TensorComplex<F> {
    pub fn new(x: &RightAction<'_, F>, res: &Resolution<F>) -> Result<Self, AlgebraError> {
        let f = x.module.field();
        let d_ring = res.target.ring();
        let d = d_ring.as_basic().ok_or_else(|| AlgebraError::Invalid("tensor over a non-basic ring".into()))?;
        if d.dim() != x.op.dim() || d.generators().len() != x.op.generators().len() {
            return Err(AlgebraError::Invalid("modules are over different algebras".into()));
        }
        let pieces: Vec<Subspace<F>> = d
            .primitive_idempotents()?
            .iter()
            .map(|v| {
                let e = x.right_expr(&v.idempotent);
                x.module.expr_matrix(&e).column_space()
            })
            .collect();
        let mut dims = Vec::new();
        let mut offsets = Vec::new();
        for p in &res.terms {
            let mut off = Vec::new();
            let mut total = 0;
            for &v in p.summands() {
                off.push(total);
                total += pieces[v].dim();
            }
            dims.push(total);
            offsets.push(off);
        }
        let mut maps = Vec::new();
        for k in 1..res.terms.len() {
            let (src, tgt) = (&res.terms[k], &res.terms[k - 1]);
            let mut m = Matrix::zeros(f, dims[k - 1], dims[k]);
            for (s, &a) in src.summands().iter().enumerate() {
                let image = res.maps[k].mul_vec(&src.top_vector(s));
                for (w, &b) in tgt.summands().iter().enumerate() {
                    let y = block_element(tgt, w, &image);
                    if y.iter().all(|c| f.is_zero(c)) {
                        continue;
                    }
                    let ry = x.right_expr(&y);
                    for (i, xi) in pieces[a].basis().iter().enumerate() {
                        let z = x.module.apply_expr(&ry, xi);
                        for (j, c) in pieces[b].coords(&z).into_iter().enumerate() {
                            m.set(offsets[k - 1][w] + j, offsets[k][s] + i, c);
                        }
                    }
                }
            }
            maps.push(m);
        }
        Ok(TensorComplex { pieces, dims, maps, offsets })
    }

    /// `dim H_j`, or `None` if the resolution is too short to tell.
    pub fn homology(&self, j: usize, res: &Resolution<F>) -> Option<usize> {
        let computed = self.dims.len();
        let finite = res.status.is_determined();
        if j >= computed {
            return finite.then_some(0);
        }
        if j + 1 >= computed && !finite {
            return None;
        }
        let out = if j == 0 { 0 } else { self.maps[j - 1].rank() };
        let inc = if j + 1 < computed { self.maps[j].rank() } else { 0 };
        Some(self.dims[j] - out - inc)
    }
}

/// `dim Tor_j^D(X, N)` by resolving `N`.
pub fn tor_dimension<F: Field>(x: &LeftModule<F>, n: &LeftModule<F>, j: usize) -> Result<usize, AlgebraError> {
    let res = minimal_resolution(n, j + 2)?;
    tor_from_resolution(x, &res, j)
}

pub fn tor_from_resolution<F: Field>(x: &LeftModule<F>, res: &Resolution<F>, j: usize) -> Result<usize, AlgebraError> {
    let tc = TensorComplex::new(&RightAction::of(x), res)?;
    tc.homology(j, res)
        .ok_or_else(|| AlgebraError::Invalid(format!("resolution too short for Tor_{j}")))
}

/// `X (x)_D N` as the cokernel of `X (x) P_1 -> X (x) P_0`, with the left
/// action of `C` when `X` is a `(C, D)`-bimodule.
pub struct TensorProduct<F: Field> {
    pub complex: TensorComplex<F>,
    /// Image of `X (x) P_1` inside `X (x) P_0`.
    pub image: Subspace<F>,
    pub free: Vec<usize>,
    pub module: Option<LeftModule<F>>,
}

impl<F: Field> TensorProduct<F> {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    fn project(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.image.quotient_coords(v, &self.free)
    }
}

pub fn tensor_over<F: Field>(x: &LeftModule<F>, res: &Resolution<F>) -> Result<TensorProduct<F>, AlgebraError> {
    let f = x.field();
    let view = RightAction::of(x);
    let complex = TensorComplex::new(&view, res)?;
    let d0 = complex.dims.first().copied().unwrap_or(0);
    let mut image = Subspace::new(f, d0);
    if let Some(m) = complex.maps.first() {
        for c in 0..m.cols() {
            image.insert(m.column(c));
        }
    }
    let free = image.free_columns();
    let module = match x.ring().tensor_factors() {
        Some((left, _)) if view.left_generators() > 0 => {
            let actions: Vec<Matrix<F>> = (0..view.left_generators())
                .map(|g| {
                    let mut m = Matrix::zeros(f, d0, d0);
                    if let Some(p0) = res.terms.first() {
                        for (s, &v) in p0.summands().iter().enumerate() {
                            let piece = &complex.pieces[v];
                            let off = complex.offsets[0][s];
                            for (i, xi) in piece.basis().iter().enumerate() {
                                let gx = x.apply_generator(g, xi);
                                for (j, c) in piece.coords(&gx).into_iter().enumerate() {
                                    m.set(off + j, off + i, c);
                                }
                            }
                        }
                    }
                    m
                })
                .collect();
            let t0 = LeftModule::new(Arc::clone(left), d0, actions)?;
            Some(t0.quotient(&image))
        }
        _ => None,
    };
    Ok(TensorProduct { complex, image, free, module })
}

/// `n -> x0 (x) n` as a matrix `N -> X (x)_D N`.
pub fn element_map<F: Field>(
    x: &LeftModule<F>,
    x0: &[F::Elem],
    res: &Resolution<F>,
    tp: &TensorProduct<F>,
) -> Result<Matrix<F>, AlgebraError> {
    let f = x.field();
    let view = RightAction::of(x);
    let n = &res.target;
    let Some(p0) = res.terms.first() else {
        return Ok(Matrix::zeros(f, tp.dim(), n.dim()));
    };
    let eps = &res.maps[0];
    let mut cols = Vec::with_capacity(n.dim());
    for i in 0..n.dim() {
        let rhs = Matrix::from_columns(f, n.dim(), &[crate::linalg::unit_vector(f, n.dim(), i)]);
        let lift = eps
            .solve(&rhs)
            .ok_or_else(|| AlgebraError::Invalid("cover is not surjective".into()))?
            .column(0);
        let mut t0 = vec![f.zero(); tp.complex.dims[0]];
        for (s, &v) in p0.summands().iter().enumerate() {
            let y = block_element(p0, s, &lift);
            let z = view.act(x0, &y);
            let piece = &tp.complex.pieces[v];
            let off = tp.complex.offsets[0][s];
            for (j, c) in piece.coords(&z).into_iter().enumerate() {
                t0[off + j] = c;
            }
        }
        cols.push(tp.project(&t0));
    }
    Ok(Matrix::from_columns(f, tp.dim(), &cols))
}

/// `g (x) N: X (x) N -> X' (x) N` for a right-module map `g: X -> X'`
/// (`g` has `dim X'` rows). Both products must come from the same
/// resolution of `N`.
pub fn induced_map<F: Field>(
    g: &Matrix<F>,
    res: &Resolution<F>,
    source: &TensorProduct<F>,
    target: &TensorProduct<F>,
) -> Result<Matrix<F>, AlgebraError> {
    let f = g.field();
    let Some(p0) = res.terms.first() else {
        return Ok(Matrix::zeros(f, target.dim(), source.dim()));
    };
    let mut cols = Vec::with_capacity(source.dim());
    for &c in &source.free {
        // locate the summand and piece basis vector of column `c`
        let s = source.complex.offsets[0].partition_point(|&o| o <= c) - 1;
        let v = p0.summands()[s];
        let xi = &source.complex.pieces[v].basis()[c - source.complex.offsets[0][s]];
        let gx = g.mul_vec(xi);
        let tpiece = &target.complex.pieces[v];
        if !tpiece.contains(&gx) {
            return Err(AlgebraError::Invalid("map does not respect the right action".into()));
        }
        let mut t0 = vec![f.zero(); target.complex.dims[0]];
        let off = target.complex.offsets[0][s];
        for (j, e) in tpiece.coords(&gx).into_iter().enumerate() {
            t0[off + j] = e;
        }
        cols.push(target.project(&t0));
    }
    Ok(Matrix::from_columns(f, target.dim(), &cols))
}

/// The sequence `0 -> N -> A (x)_B N -> (A/B) (x)_B N -> 0` for a left
/// `B`-module `N`, as its two maps.
pub struct ShiftSequence<F: Field> {
    pub unit_map: Matrix<F>,
    pub projection: Matrix<F>,
    pub induced: LeftModule<F>,
    pub quotient: LeftModule<F>,
}

impl<F: Field> ShiftSequence<F> {
    /// Exactness of the short sequence, with the zero ends included.
    pub fn is_exact(&self) -> bool {
        let f = self.unit_map.field();
        let n = self.unit_map.cols();
        let q = self.projection.rows();
        let maps = [
            Matrix::zeros(f, 0, q),
            self.projection.clone(),
            self.unit_map.clone(),
            Matrix::zeros(f, n, 0),
        ];
        crate::module::exactness_check(&maps).is_exact()
    }
}

pub fn shift_sequence<F: Field>(
    rings: &crate::module::ExtensionRings<F>,
    n: &LeftModule<F>,
) -> Result<ShiftSequence<F>, AlgebraError> {
    let res = minimal_resolution(n, 2)?;
    let a_bi = rings.a_as_bimodule();
    let q_bi = rings.quotient_bimodule();
    let ta = tensor_over(&a_bi, &res)?;
    let tq = tensor_over(&q_bi, &res)?;
    let unit_map = element_map(&a_bi, rings.embedding.big.unit(), &res, &ta)?;
    let projection = induced_map(&rings.quotient_projection(), &res, &ta, &tq)?;
    let induced = ta.module.clone().unwrap_or_else(|| LeftModule::zero(&rings.a));
    let quotient = tq.module.clone().unwrap_or_else(|| LeftModule::zero(&rings.b));
    Ok(ShiftSequence { unit_map, projection, induced, quotient })
}

/// `X (x)_D N` when `X` is a `(C, D)`-bimodule, as a left `C`-module.
pub fn tensor_module<F: Field>(x: &LeftModule<F>, n: &LeftModule<F>) -> Result<LeftModule<F>, AlgebraError> {
    let res = minimal_resolution(n, 2)?;
    let tp = tensor_over(x, &res)?;
    tp.module.ok_or_else(|| AlgebraError::Invalid("left factor has no left action".into()))
}

/// The ring of left `C`-modules produced by `tensor_module`.
pub fn left_ring<F: Field>(x: &LeftModule<F>) -> Option<Arc<Ring<F>>> {
    x.ring().tensor_factors().map(|(l, _)| Arc::clone(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::module::{random_module, ExtensionRings, PdStatus, RandomBounds};
    use crate::presentation::parse_presentation;
    use crate::quiver::BoundQuiverAlgebra;

    fn rings(text: &str) -> ExtensionRings<PrimeField> {
        let pres = parse_presentation(text).unwrap();
        let a = BoundQuiverAlgebra::build(&PrimeField::new(1009).unwrap(), &pres).unwrap();
        ExtensionRings::new(a.subalgebra(&pres, false).unwrap())
    }

    const SMALL: &str = "vertex 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation a.b\ncap 3\n\
                         generator 1\ngenerator 2\ngenerator b";

    #[test]
    fn unit_isomorphism() {
        let r = rings(SMALL);
        // B (x)_B N = N for B as a bimodule over itself.
        let b_bi = {
            let b = &r.embedding.small;
            let mut acts: Vec<Matrix<PrimeField>> = b.generators().iter().map(|g| b.left_mult_matrix(&g.element)).collect();
            acts.extend(b.generators().iter().map(|g| b.right_mult_matrix(&g.element)));
            LeftModule::new(Arc::clone(&r.b_env), b.dim(), acts).unwrap()
        };
        for seed in 0..10 {
            let n = random_module(&r.b, seed, RandomBounds::default()).unwrap();
            let t = tensor_module(&b_bi, &n).unwrap();
            assert_eq!(t.dim(), n.dim());
            assert_eq!(tor_dimension(&b_bi, &n, 1).unwrap(), 0);
            let res = minimal_resolution(&n, 4).unwrap();
            if let PdStatus::Finite(_) = res.status {
                assert_eq!(minimal_resolution(&t, 4).unwrap().multiplicities(), res.multiplicities());
            }
        }
    }

    #[test]
    fn quotient_tensor_regular() {
        let r = rings(SMALL);
        let q = r.quotient_bimodule();
        let b = LeftModule::regular(&r.b);
        let t = tensor_module(&q, &b).unwrap();
        assert_eq!(t.dim(), q.dim());
        assert_eq!(tor_dimension(&r.quotient_right(), &b, 1).unwrap(), 0);
    }

    #[test]
    fn tor_zero_is_tensor_dimension() {
        let r = rings(SMALL);
        for seed in 0..10 {
            let n = random_module(&r.b, seed, RandomBounds::default()).unwrap();
            let res = minimal_resolution(&n, 3).unwrap();
            let tp = tensor_over(&r.quotient_right(), &res).unwrap();
            assert_eq!(tor_from_resolution(&r.quotient_right(), &res, 0).unwrap(), tp.dim());
        }
    }

    #[test]
    fn shift_sequence_is_exact() {
        let r = rings(SMALL);
        for seed in 0..10 {
            let n = random_module(&r.b, seed, RandomBounds::default()).unwrap();
            let seq = shift_sequence(&r, &n).unwrap();
            assert!(seq.is_exact(), "seed {seed}");
        }
    }
}

//! Finite-dimensional modules, projective covers and minimal resolutions.
//!
//! A module stores one action matrix per generator of its ring. Rings are
//! either a basic algebra `A`, or a tensor product `C (x) D^op` whose modules
//! are `(C, D)`-bimodules; the enveloping algebra of `B` is `B (x) B^op`.
//! Right modules over `D` are left modules over `D^op`.

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{kron_vec, pair_label, Expr, FiniteDimAlgebra, SubalgebraEmbedding};
use crate::error::AlgebraError;
use crate::field::Field;
use crate::linalg::{add_scaled_vec, is_zero_vec, unit_vector, Matrix, Subspace};

/// The indecomposable projective at one vertex, with a fixed basis.
#[derive(Clone, Debug)]
pub struct ProjectiveData<F: Field> {
    pub label: String,
    pub dim: usize,
    /// One matrix per ring generator.
    pub actions: Vec<Matrix<F>>,
    /// `exprs[j] * top = basis_j`.
    pub exprs: Vec<Expr<F>>,
    /// Coordinates of the generating idempotent.
    pub top: Vec<F::Elem>,
    /// For `A e_v`: the basis as elements of `A`.
    pub elements: Option<Vec<Vec<F::Elem>>>,
    pub radical: Subspace<F>,
}

#[derive(Debug)]
enum RingKind<F: Field> {
    Basic(Arc<FiniteDimAlgebra<F>>),
    Tensor { left: Arc<Ring<F>>, right_op: Arc<Ring<F>> },
}

/// The ring a module lives over, with cached projectives.
#[derive(Debug)]
pub struct Ring<F: Field> {
    kind: RingKind<F>,
    projectives: OnceLock<Result<Vec<ProjectiveData<F>>, AlgebraError>>,
}

impl<F: Field> Ring<F> {
    pub fn basic(alg: Arc<FiniteDimAlgebra<F>>) -> Arc<Self> {
        Arc::new(Ring { kind: RingKind::Basic(alg), projectives: OnceLock::new() })
    }

    /// `C (x) D^op`, given the rings of `C` and of `D^op`.
    pub fn tensor(left: &Arc<Ring<F>>, right_op: &Arc<Ring<F>>) -> Arc<Self> {
        assert!(left.as_basic().is_some() && right_op.as_basic().is_some(), "tensor factors must be basic");
        Arc::new(Ring {
            kind: RingKind::Tensor { left: Arc::clone(left), right_op: Arc::clone(right_op) },
            projectives: OnceLock::new(),
        })
    }

    pub fn as_basic(&self) -> Option<&Arc<FiniteDimAlgebra<F>>> {
        match &self.kind {
            RingKind::Basic(a) => Some(a),
            RingKind::Tensor { .. } => None,
        }
    }

    #[allow(clippy::type_complexity)]
    pub fn tensor_factors(&self) -> Option<(&Arc<Ring<F>>, &Arc<Ring<F>>)> {
        match &self.kind {
            RingKind::Basic(_) => None,
            RingKind::Tensor { left, right_op } => Some((left, right_op)),
        }
    }

    pub fn field(&self) -> &F {
        match &self.kind {
            RingKind::Basic(a) => a.field(),
            RingKind::Tensor { left, .. } => left.field(),
        }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            RingKind::Basic(a) => a.dim(),
            RingKind::Tensor { left, right_op } => left.dim() * right_op.dim(),
        }
    }

    pub fn num_generators(&self) -> usize {
        match &self.kind {
            RingKind::Basic(a) => a.generators().len(),
            RingKind::Tensor { left, right_op } => left.num_generators() + right_op.num_generators(),
        }
    }

    /// Generators acting from the left; for a tensor ring the remaining ones
    /// realise the right action.
    pub fn left_generator_count(&self) -> usize {
        match &self.kind {
            RingKind::Basic(a) => a.generators().len(),
            RingKind::Tensor { left, .. } => left.num_generators(),
        }
    }

    pub fn vertex_labels(&self) -> Result<Vec<String>, AlgebraError> {
        match &self.kind {
            RingKind::Basic(a) => Ok(a.primitive_idempotents()?.iter().map(|v| v.label.clone()).collect()),
            RingKind::Tensor { left, right_op } => {
                let l = left.vertex_labels()?;
                let r = right_op.vertex_labels()?;
                Ok(l.iter().flat_map(|a| r.iter().map(move |b| pair_label(a, b))).collect())
            }
        }
    }

    pub fn vertex_count(&self) -> Result<usize, AlgebraError> {
        Ok(self.vertex_labels()?.len())
    }

    /// Expression for the primitive idempotent at vertex `v`.
    pub fn vertex_expr(&self, v: usize) -> Result<Expr<F>, AlgebraError> {
        match &self.kind {
            RingKind::Basic(a) => Ok(a.element_expr(&a.primitive_idempotents()?[v].idempotent)),
            RingKind::Tensor { left, right_op } => {
                let nr = right_op.vertex_count()?;
                let l = left.vertex_expr(v / nr)?;
                let r = right_op.vertex_expr(v % nr)?.shifted(left.num_generators());
                Ok(l.product(&r, self.field()))
            }
        }
    }

    /// Elements whose left multiples span the radical of the ring.
    pub fn radical_exprs(&self) -> Result<Vec<Expr<F>>, AlgebraError> {
        match &self.kind {
            RingKind::Basic(a) => Ok(a.radical_generators()?.iter().map(|r| a.element_expr(r)).collect()),
            RingKind::Tensor { left, right_op } => {
                let mut out = left.radical_exprs()?;
                let shift = left.num_generators();
                out.extend(right_op.radical_exprs()?.iter().map(|e| e.shifted(shift)));
                Ok(out)
            }
        }
    }

    pub fn projectives(&self) -> Result<&[ProjectiveData<F>], AlgebraError> {
        self.projectives
            .get_or_init(|| self.compute_projectives())
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    fn compute_projectives(&self) -> Result<Vec<ProjectiveData<F>>, AlgebraError> {
        let f = self.field();
        let radical_exprs = self.radical_exprs()?;
        let mut out = Vec::new();
        match &self.kind {
            RingKind::Basic(a) => {
                for vertex in a.primitive_idempotents()? {
                    let span = a.right_mult_matrix(&vertex.idempotent).column_space();
                    let rows = span.basis().to_vec();
                    let d = rows.len();
                    let actions = a
                        .generators()
                        .iter()
                        .map(|g| {
                            let cols: Vec<Vec<F::Elem>> = rows.iter().map(|r| span.coords(&a.mul(&g.element, r))).collect();
                            Matrix::from_columns(f, d, &cols)
                        })
                        .collect();
                    let exprs = rows.iter().map(|r| a.element_expr(r)).collect();
                    let top = span.coords(&vertex.idempotent);
                    let mut p = ProjectiveData {
                        label: vertex.label.clone(),
                        dim: d,
                        actions,
                        exprs,
                        top,
                        elements: Some(rows),
                        radical: Subspace::new(f, d),
                    };
                    p.radical = radical_of(f, &p.actions, &radical_exprs, d);
                    out.push(p);
                }
            }
            RingKind::Tensor { left, right_op } => {
                let shift = left.num_generators();
                for p in left.projectives()? {
                    for q in right_op.projectives()? {
                        let d = p.dim * q.dim;
                        let mut actions: Vec<Matrix<F>> =
                            p.actions.iter().map(|m| m.kronecker(&Matrix::identity(f, q.dim))).collect();
                        actions.extend(q.actions.iter().map(|m| Matrix::identity(f, p.dim).kronecker(m)));
                        let exprs = p
                            .exprs
                            .iter()
                            .flat_map(|x| q.exprs.iter().map(move |y| (x, y)))
                            .map(|(x, y)| x.product(&y.shifted(shift), f))
                            .collect();
                        let mut pd = ProjectiveData {
                            label: pair_label(&p.label, &q.label),
                            dim: d,
                            actions,
                            exprs,
                            top: kron_vec(f, &p.top, &q.top),
                            elements: None,
                            radical: Subspace::new(f, d),
                        };
                        pd.radical = radical_of(f, &pd.actions, &radical_exprs, d);
                        out.push(pd);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn apply_word<F: Field>(actions: &[Matrix<F>], word: &[usize], v: &[F::Elem]) -> Vec<F::Elem> {
    let mut w = v.to_vec();
    for &g in word.iter().rev() {
        w = actions[g].mul_vec(&w);
    }
    w
}

fn apply_expr_with<F: Field>(f: &F, actions: &[Matrix<F>], e: &Expr<F>, v: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); v.len()];
    for (c, word) in &e.terms {
        add_scaled_vec(f, &mut out, c, &apply_word(actions, word, v));
    }
    out
}

fn radical_of<F: Field>(f: &F, actions: &[Matrix<F>], rad: &[Expr<F>], dim: usize) -> Subspace<F> {
    let mut s = Subspace::new(f, dim);
    for t in rad {
        for i in 0..dim {
            s.insert(apply_expr_with(f, actions, t, &unit_vector(f, dim, i)));
        }
    }
    s
}

/// A finite-dimensional left module.
#[derive(Clone, Debug)]
pub struct LeftModule<F: Field> {
    ring: Arc<Ring<F>>,
    dim: usize,
    actions: Vec<Matrix<F>>,
}

impl<F: Field> LeftModule<F> {
    pub fn new(ring: Arc<Ring<F>>, dim: usize, actions: Vec<Matrix<F>>) -> Result<Self, AlgebraError> {
        if actions.len() != ring.num_generators() {
            return Err(AlgebraError::Invalid(format!(
                "expected {} action matrices, got {}",
                ring.num_generators(),
                actions.len()
            )));
        }
        if actions.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(AlgebraError::Invalid("action matrix has the wrong size".into()));
        }
        Ok(LeftModule { ring, dim, actions })
    }

    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        let f = ring.field();
        let actions = (0..ring.num_generators()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        LeftModule { ring: Arc::clone(ring), dim: 0, actions }
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(ring: &Arc<Ring<F>>) -> Self {
        let a = ring.as_basic().expect("regular module of a basic ring");
        let actions = a.generators().iter().map(|g| a.left_mult_matrix(&g.element)).collect();
        LeftModule { ring: Arc::clone(ring), dim: a.dim(), actions }
    }

    pub fn projective(ring: &Arc<Ring<F>>, v: usize) -> Result<Self, AlgebraError> {
        let p = &ring.projectives()?[v];
        Ok(LeftModule { ring: Arc::clone(ring), dim: p.dim, actions: p.actions.clone() })
    }

    pub fn simple(ring: &Arc<Ring<F>>, v: usize) -> Result<Self, AlgebraError> {
        let p = LeftModule::projective(ring, v)?;
        let rad = ring.projectives()?[v].radical.clone();
        Ok(p.quotient(&rad))
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }
    pub fn field(&self) -> &F {
        self.ring.field()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn actions(&self) -> &[Matrix<F>] {
        &self.actions
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn apply_generator(&self, g: usize, v: &[F::Elem]) -> Vec<F::Elem> {
        self.actions[g].mul_vec(v)
    }

    pub fn apply_expr(&self, e: &Expr<F>, v: &[F::Elem]) -> Vec<F::Elem> {
        apply_expr_with(self.field(), &self.actions, e, v)
    }

    pub fn expr_matrix(&self, e: &Expr<F>) -> Matrix<F> {
        let f = self.field();
        let cols: Vec<Vec<F::Elem>> = (0..self.dim).map(|i| self.apply_expr(e, &unit_vector(f, self.dim, i))).collect();
        Matrix::from_columns(f, self.dim, &cols)
    }

    /// Checks that the action matrices define a module: every relation of
    /// the basis multiplication table holds and 1 acts as the identity.
    pub fn validate(&self) -> Result<(), String> {
        match &self.ring.kind {
            RingKind::Basic(a) => check_actions(a, &self.actions, self.dim),
            RingKind::Tensor { left, right_op } => {
                let gl = left.num_generators();
                let (l, r) = self.actions.split_at(gl);
                check_actions(left.as_basic().unwrap(), l, self.dim)?;
                check_actions(right_op.as_basic().unwrap(), r, self.dim)?;
                for (i, x) in l.iter().enumerate() {
                    for (j, y) in r.iter().enumerate() {
                        if x.mul(y) != y.mul(x) {
                            return Err(format!("left generator {i} and right generator {j} do not commute"));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let f = self.field();
        let n = self.dim + other.dim;
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(f, n, n);
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        m.set(r, c, a.get(r, c).clone());
                    }
                }
                for r in 0..other.dim {
                    for c in 0..other.dim {
                        m.set(self.dim + r, self.dim + c, b.get(r, c).clone());
                    }
                }
                m
            })
            .collect();
        LeftModule { ring: Arc::clone(&self.ring), dim: n, actions }
    }

    /// Smallest submodule containing the vectors.
    pub fn submodule_closure(&self, vectors: impl IntoIterator<Item = Vec<F::Elem>>) -> Subspace<F> {
        let mut span = Subspace::new(self.field(), self.dim);
        let mut queue: Vec<Vec<F::Elem>> = Vec::new();
        for v in vectors {
            if span.insert(v.clone()) {
                queue.push(v);
            }
        }
        while let Some(v) = queue.pop() {
            for g in 0..self.actions.len() {
                let w = self.apply_generator(g, &v);
                if span.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        span
    }

    pub fn is_submodule(&self, s: &Subspace<F>) -> bool {
        s.basis().iter().all(|v| (0..self.actions.len()).all(|g| s.contains(&self.apply_generator(g, v))))
    }

    /// The submodule on an invariant subspace, in the subspace's basis.
    pub fn submodule(&self, s: &Subspace<F>) -> Self {
        let f = self.field();
        let d = s.dim();
        let actions = self
            .actions
            .iter()
            .map(|m| {
                let cols: Vec<Vec<F::Elem>> = s.basis().iter().map(|v| s.coords(&m.mul_vec(v))).collect();
                Matrix::from_columns(f, d, &cols)
            })
            .collect();
        LeftModule { ring: Arc::clone(&self.ring), dim: d, actions }
    }

    /// The quotient by an invariant subspace, in the basis of free columns.
    pub fn quotient(&self, s: &Subspace<F>) -> Self {
        let f = self.field();
        let free = s.free_columns();
        let d = free.len();
        let actions = self
            .actions
            .iter()
            .map(|m| {
                let cols: Vec<Vec<F::Elem>> = free.iter().map(|&c| s.quotient_coords(&m.column(c), &free)).collect();
                Matrix::from_columns(f, d, &cols)
            })
            .collect();
        LeftModule { ring: Arc::clone(&self.ring), dim: d, actions }
    }

    pub fn radical(&self) -> Result<Subspace<F>, AlgebraError> {
        Ok(radical_of(self.field(), &self.actions, &self.ring.radical_exprs()?, self.dim))
    }

    /// Module over `target` whose generator `g` acts as `exprs[g]` does here.
    pub fn restrict(&self, target: &Arc<Ring<F>>, exprs: &[Expr<F>]) -> Self {
        assert_eq!(exprs.len(), target.num_generators());
        let actions = exprs.iter().map(|e| self.expr_matrix(e)).collect();
        LeftModule { ring: Arc::clone(target), dim: self.dim, actions }
    }

    /// A bimodule viewed as a left module over its left factor.
    pub fn left_part(&self) -> Self {
        let (left, _) = self.ring.tensor_factors().expect("bimodule");
        let gl = left.num_generators();
        LeftModule { ring: Arc::clone(left), dim: self.dim, actions: self.actions[..gl].to_vec() }
    }

    /// A bimodule viewed as a right module over its right factor.
    pub fn right_part(&self) -> Self {
        let (left, right_op) = self.ring.tensor_factors().expect("bimodule");
        let gl = left.num_generators();
        LeftModule { ring: Arc::clone(right_op), dim: self.dim, actions: self.actions[gl..].to_vec() }
    }

    /// Whether `m` (columns in `self`, rows in `target`) commutes with every
    /// generator.
    pub fn is_homomorphism(&self, target: &Self, m: &Matrix<F>) -> bool {
        m.rows() == target.dim
            && m.cols() == self.dim
            && self.actions.iter().zip(&target.actions).all(|(a, b)| m.mul(a) == b.mul(m))
    }

    /// Same dimension and identical action matrices.
    pub fn same_actions(&self, other: &Self) -> bool {
        self.dim == other.dim && self.actions == other.actions
    }
}

fn check_actions<F: Field>(a: &FiniteDimAlgebra<F>, actions: &[Matrix<F>], dim: usize) -> Result<(), String> {
    let f = a.field();
    let n = a.dim();
    let basis_action = |k: usize| -> Matrix<F> {
        let mut m = Matrix::identity(f, dim);
        for &g in a.words()[k].iter().rev() {
            m = actions[g].mul(&m);
        }
        m
    };
    let acts: Vec<Matrix<F>> = (0..n).map(basis_action).collect();
    let as_matrix = |x: &[F::Elem]| -> Matrix<F> {
        let mut m = Matrix::zeros(f, dim, dim);
        for (k, c) in x.iter().enumerate() {
            if !f.is_zero(c) {
                m.add_scaled(c, &acts[k]);
            }
        }
        m
    };
    if as_matrix(a.unit()) != Matrix::identity(f, dim) {
        return Err("the unit does not act as the identity".into());
    }
    for (g, gen) in a.generators().iter().enumerate() {
        if as_matrix(&gen.element) != actions[g] {
            return Err(format!("generator `{}` acts inconsistently with its basis expansion", gen.label));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = acts[i].mul(&acts[j]);
            let mut rhs = Matrix::zeros(f, dim, dim);
            for (k, c) in a.basis_product(i, j) {
                rhs.add_scaled(c, &acts[*k]);
            }
            if lhs != rhs {
                return Err(format!("basis product ({}, {}) is not respected", a.labels()[i], a.labels()[j]));
            }
        }
    }
    Ok(())
}

/// A direct sum of indecomposable projectives, acted on blockwise.
#[derive(Clone, Debug)]
pub struct ProjectiveSum<F: Field> {
    ring: Arc<Ring<F>>,
    summands: Vec<usize>,
    offsets: Vec<usize>,
    dim: usize,
}

impl<F: Field> ProjectiveSum<F> {
    pub fn new(ring: &Arc<Ring<F>>, summands: Vec<usize>) -> Result<Self, AlgebraError> {
        let ps = ring.projectives()?;
        let mut offsets = Vec::with_capacity(summands.len());
        let mut dim = 0;
        for &v in &summands {
            offsets.push(dim);
            dim += ps[v].dim;
        }
        Ok(ProjectiveSum { ring: Arc::clone(ring), summands, offsets, dim })
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn summands(&self) -> &[usize] {
        &self.summands
    }
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    fn data(&self, s: usize) -> &ProjectiveData<F> {
        &self.ring.projectives().expect("projectives computed at construction")[self.summands[s]]
    }

    /// Multiplicity of each indecomposable projective.
    pub fn multiplicities(&self) -> Vec<usize> {
        let n = self.ring.vertex_count().expect("vertices computed at construction");
        let mut m = vec![0; n];
        for &v in &self.summands {
            m[v] += 1;
        }
        m
    }

    pub fn block<'a>(&self, s: usize, v: &'a [F::Elem]) -> &'a [F::Elem] {
        &v[self.offsets[s]..self.offsets[s] + self.data(s).dim]
    }

    /// The generating idempotent of summand `s`.
    pub fn top_vector(&self, s: usize) -> Vec<F::Elem> {
        let f = self.ring.field();
        let mut v = vec![f.zero(); self.dim];
        v[self.offsets[s]..self.offsets[s] + self.data(s).dim].clone_from_slice(&self.data(s).top);
        v
    }

    pub fn apply_generator(&self, g: usize, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.ring.field();
        let mut out = vec![f.zero(); self.dim];
        for s in 0..self.summands.len() {
            let blk = self.block(s, v);
            if is_zero_vec(f, blk) {
                continue;
            }
            let img = self.data(s).actions[g].mul_vec(blk);
            out[self.offsets[s]..self.offsets[s] + img.len()].clone_from_slice(&img);
        }
        out
    }

    pub fn radical(&self) -> Subspace<F> {
        let f = self.ring.field();
        let mut s = Subspace::new(f, self.dim);
        for (i, &off) in self.offsets.iter().enumerate() {
            for r in self.data(i).radical.basis() {
                let mut v = vec![f.zero(); self.dim];
                v[off..off + r.len()].clone_from_slice(r);
                s.insert(v);
            }
        }
        s
    }

    pub fn to_module(&self) -> LeftModule<F> {
        let f = self.ring.field();
        let n = self.ring.num_generators();
        let actions = (0..n)
            .map(|g| {
                let cols: Vec<Vec<F::Elem>> =
                    (0..self.dim).map(|i| self.apply_generator(g, &unit_vector(f, self.dim, i))).collect();
                Matrix::from_columns(f, self.dim, &cols)
            })
            .collect();
        LeftModule { ring: Arc::clone(&self.ring), dim: self.dim, actions }
    }

    /// Subspace closure under the action, without materialising matrices.
    pub fn submodule_closure(&self, vectors: impl IntoIterator<Item = Vec<F::Elem>>) -> Subspace<F> {
        let mut span = Subspace::new(self.ring.field(), self.dim);
        let mut queue = Vec::new();
        for v in vectors {
            if span.insert(v.clone()) {
                queue.push(v);
            }
        }
        while let Some(v) = queue.pop() {
            for g in 0..self.ring.num_generators() {
                let w = self.apply_generator(g, &v);
                if span.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        span
    }

    /// Submodule on an invariant subspace, acting blockwise.
    fn submodule(&self, s: &Subspace<F>) -> LeftModule<F> {
        let f = self.ring.field();
        let d = s.dim();
        let actions = (0..self.ring.num_generators())
            .map(|g| {
                let cols: Vec<Vec<F::Elem>> = s.basis().iter().map(|v| s.coords(&self.apply_generator(g, v))).collect();
                Matrix::from_columns(f, d, &cols)
            })
            .collect();
        LeftModule { ring: Arc::clone(&self.ring), dim: d, actions }
    }
}

/// A projective cover `P -> M`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover<F: Field> {
    pub projective: ProjectiveSum<F>,
    /// `dim M x dim P`.
    pub epi: Matrix<F>,
}

pub fn projective_cover<F: Field>(m: &LeftModule<F>) -> Result<ProjectiveCover<F>, AlgebraError> {
    let ring = m.ring();
    let f = m.field();
    let mut span = m.radical()?;
    let mut summands = Vec::new();
    let mut tops = Vec::new();
    for v in 0..ring.vertex_count()? {
        let e = ring.vertex_expr(v)?;
        for i in 0..m.dim() {
            let x = m.apply_expr(&e, &unit_vector(f, m.dim(), i));
            if span.insert(x.clone()) {
                summands.push(v);
                tops.push(x);
            }
        }
    }
    let projective = ProjectiveSum::new(ring, summands)?;
    let ps = ring.projectives()?;
    let mut cols = Vec::with_capacity(projective.dim());
    for (s, &v) in projective.summands().iter().enumerate() {
        for e in &ps[v].exprs {
            cols.push(m.apply_expr(e, &tops[s]));
        }
    }
    let epi = Matrix::from_columns(f, m.dim(), &cols);
    Ok(ProjectiveCover { projective, epi })
}

/// `Omega(M)` together with the kernel subspace of the cover it lives in.
pub fn syzygy<F: Field>(m: &LeftModule<F>) -> Result<LeftModule<F>, AlgebraError> {
    let cover = projective_cover(m)?;
    let kernel = Subspace::from_matrix_rows(&cover.epi.kernel_basis());
    Ok(cover.projective.submodule(&kernel))
}

pub fn nth_syzygy<F: Field>(m: &LeftModule<F>, n: usize) -> Result<LeftModule<F>, AlgebraError> {
    let mut cur = m.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = syzygy(&cur)?;
    }
    Ok(cur)
}

/// Projective dimension, possibly only bounded below by a cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "kebab-case")]
pub enum PdStatus {
    /// The zero module.
    Zero,
    Finite(usize),
    /// The `c`-th syzygy is nonzero.
    AtLeast(usize),
}

impl PdStatus {
    fn lower(self) -> i64 {
        match self {
            PdStatus::Zero => i64::MIN,
            PdStatus::Finite(n) | PdStatus::AtLeast(n) => n as i64,
        }
    }

    fn upper(self) -> i64 {
        match self {
            PdStatus::Zero => i64::MIN,
            PdStatus::Finite(n) => n as i64,
            PdStatus::AtLeast(_) => i64::MAX,
        }
    }

    /// `self <= other` when decidable from the known intervals.
    pub fn le(self, other: PdStatus) -> Option<bool> {
        if self.upper() <= other.lower() {
            Some(true)
        } else if self.lower() > other.upper() {
            Some(false)
        } else {
            None
        }
    }

    pub fn is_determined(self) -> bool {
        !matches!(self, PdStatus::AtLeast(_))
    }

    /// The value with the zero module counted as 0.
    pub fn value(self) -> Option<usize> {
        match self {
            PdStatus::Zero => Some(0),
            PdStatus::Finite(n) => Some(n),
            PdStatus::AtLeast(_) => None,
        }
    }

    /// Larger of two statuses in the interval order.
    pub fn max(self, other: PdStatus) -> PdStatus {
        match (self, other) {
            (PdStatus::Zero, x) | (x, PdStatus::Zero) => x,
            (PdStatus::Finite(a), PdStatus::Finite(b)) => PdStatus::Finite(a.max(b)),
            (PdStatus::AtLeast(a), PdStatus::Finite(b)) | (PdStatus::Finite(b), PdStatus::AtLeast(a)) => {
                PdStatus::AtLeast(a.max(b))
            }
            (PdStatus::AtLeast(a), PdStatus::AtLeast(b)) => PdStatus::AtLeast(a.max(b)),
        }
    }
}

impl std::fmt::Display for PdStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PdStatus::Zero => write!(f, "Zero"),
            PdStatus::Finite(n) => write!(f, "Finite({n})"),
            PdStatus::AtLeast(c) => write!(f, "AtLeast({c})"),
        }
    }
}

/// A minimal projective resolution, computed up to a cutoff.
#[derive(Clone, Debug)]
pub struct Resolution<F: Field> {
    pub target: LeftModule<F>,
    pub terms: Vec<ProjectiveSum<F>>,
    /// `maps[0]: P_0 -> M`, `maps[k]: P_k -> P_{k-1}`.
    pub maps: Vec<Matrix<F>>,
    /// `syzygies[k]` is `Omega^{k+1}(M)`; the last one is nonzero only when
    /// the cutoff was hit.
    pub syzygies: Vec<LeftModule<F>>,
    pub status: PdStatus,
    pub cutoff: usize,
}

impl<F: Field> Resolution<F> {
    pub fn multiplicities(&self) -> Vec<Vec<usize>> {
        self.terms.iter().map(ProjectiveSum::multiplicities).collect()
    }

    /// Multiplicities as labelled summands, e.g. `["X(1,3)", "X(2,4)"]`.
    pub fn labelled_terms(&self) -> Result<Vec<Vec<String>>, AlgebraError> {
        let labels = self.target.ring().vertex_labels()?;
        Ok(self
            .multiplicities()
            .iter()
            .map(|m| {
                m.iter()
                    .enumerate()
                    .flat_map(|(v, &k)| std::iter::repeat_n(labels[v].clone(), k))
                    .collect()
            })
            .collect())
    }

    /// Exactness of `P_n -> ... -> P_0 -> M -> 0`. When the cutoff was hit,
    /// the kernel of the top differential must be the last syzygy instead.
    pub fn exactness(&self) -> ExactnessReport {
        let mut report = exactness_check(&self.maps);
        if !self.status.is_determined() {
            let top_kernel = self.syzygies.last().map_or(0, LeftModule::dim);
            if let Some(top) = report.positions.last_mut() {
                top.homology_dim = if top.homology_dim == top_kernel { 0 } else { top.homology_dim.max(1) };
            }
        }
        report
    }

    /// Every differential `P_k -> P_{k-1}` lands in the radical.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().enumerate().skip(1).all(|(k, d)| {
            let rad = self.terms[k - 1].radical();
            (0..d.cols()).all(|c| rad.contains(&d.column(c)))
        })
    }
}

/// Syzygies larger than this stop `projective_dimension` early.
pub const DEFAULT_MAX_SYZYGY_DIM: usize = 600;

pub fn minimal_resolution<F: Field>(m: &LeftModule<F>, cutoff: usize) -> Result<Resolution<F>, AlgebraError> {
    minimal_resolution_bounded(m, cutoff, usize::MAX)
}

/// Like `minimal_resolution`, but stops with `AtLeast(k)` as soon as the
/// nonzero syzygy `Omega^k` has dimension above `max_dim`.
pub fn minimal_resolution_bounded<F: Field>(
    m: &LeftModule<F>,
    cutoff: usize,
    max_dim: usize,
) -> Result<Resolution<F>, AlgebraError> {
    assert!(cutoff >= 1, "cutoff must be positive");
    let mut res = Resolution {
        target: m.clone(),
        terms: Vec::new(),
        maps: Vec::new(),
        syzygies: Vec::new(),
        status: PdStatus::Zero,
        cutoff,
    };
    if m.is_zero() {
        return Ok(res);
    }
    let mut cur = m.clone();
    let mut inclusion: Option<Matrix<F>> = None;
    for k in 0..cutoff {
        let cover = projective_cover(&cur)?;
        let d = match &inclusion {
            None => cover.epi.clone(),
            Some(inc) => inc.mul(&cover.epi),
        };
        let kernel = Subspace::from_matrix_rows(&cover.epi.kernel_basis());
        res.terms.push(cover.projective.clone());
        res.maps.push(d);
        if kernel.dim() == 0 {
            res.status = PdStatus::Finite(k);
            return Ok(res);
        }
        let omega = cover.projective.submodule(&kernel);
        inclusion = Some(kernel.to_matrix().transpose());
        res.syzygies.push(omega.clone());
        if omega.dim() > max_dim && k + 1 < cutoff {
            res.status = PdStatus::AtLeast(k + 1);
            return Ok(res);
        }
        cur = omega;
    }
    res.status = PdStatus::AtLeast(cutoff);
    Ok(res)
}

pub fn projective_dimension<F: Field>(m: &LeftModule<F>, cutoff: usize) -> Result<PdStatus, AlgebraError> {
    Ok(minimal_resolution_bounded(m, cutoff, DEFAULT_MAX_SYZYGY_DIM)?.status)
}

/// Homology of a complex at one position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionReport {
    pub position: usize,
    pub composite_zero: bool,
    pub homology_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub positions: Vec<PositionReport>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.positions.iter().all(|p| p.composite_zero && p.homology_dim == 0)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.positions.iter().find(|p| !p.composite_zero || p.homology_dim != 0).map(|p| p.position)
    }
}

/// Exactness of `0 -> V_n -> ... -> V_1 -> V_0 -> 0` where
/// `maps[i]: V_{i+1} -> V_i`.
pub fn exactness_check<F: Field>(maps: &[Matrix<F>]) -> ExactnessReport {
    if maps.is_empty() {
        return ExactnessReport { positions: Vec::new() };
    }
    let n = maps.len();
    let dims: Vec<usize> = (0..=n).map(|i| if i < n { maps[i].rows() } else { maps[n - 1].cols() }).collect();
    let ranks: Vec<usize> = maps.iter().map(Matrix::rank).collect();
    let positions = (0..=n)
        .map(|i| {
            let incoming = if i < n { ranks[i] } else { 0 };
            let outgoing = if i > 0 { ranks[i - 1] } else { 0 };
            let composite_zero = i == 0 || i == n || maps[i - 1].mul(&maps[i]).is_zero();
            PositionReport {
                position: i,
                composite_zero,
                homology_dim: (dims[i] - outgoing).saturating_sub(incoming),
            }
        })
        .collect();
    ExactnessReport { positions }
}

/// Size limits for seeded random modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomBounds {
    pub max_summands: usize,
    pub max_relations: usize,
}

impl Default for RandomBounds {
    fn default() -> Self {
        RandomBounds { max_summands: 3, max_relations: 3 }
    }
}

/// Cokernel of a seeded random map between sums of indecomposable
/// projectives. Relation images are biased into the radical.
pub fn random_module<F: Field>(ring: &Arc<Ring<F>>, seed: u64, bounds: RandomBounds) -> Result<LeftModule<F>, AlgebraError> {
    let f = ring.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = ring.vertex_count()?;
    if bounds.max_summands == 0 || nv == 0 {
        return Ok(LeftModule::zero(ring));
    }
    let count = rng.gen_range(1..=bounds.max_summands);
    let summands: Vec<usize> = (0..count).map(|_| rng.gen_range(0..nv)).collect();
    let mut sorted = summands.clone();
    sorted.sort_unstable();
    let p = ProjectiveSum::new(ring, sorted)?;
    let rad = ring.radical_exprs()?;
    let relations = rng.gen_range(0..=bounds.max_relations);
    let mut images = Vec::with_capacity(relations);
    let mut in_radical = Vec::with_capacity(relations);
    for _ in 0..relations {
        let u = rng.gen_range(0..nv);
        let mut x: Vec<F::Elem> = (0..p.dim()).map(|_| f.sample_small(&mut rng)).collect();
        let radical = !rad.is_empty() && rng.gen_bool(0.75);
        if radical {
            let t = &rad[rng.gen_range(0..rad.len())];
            x = apply_expr_sum(&p, t, &x);
        }
        images.push(apply_expr_sum(&p, &ring.vertex_expr(u)?, &x));
        in_radical.push(radical);
    }
    let sub = p.submodule_closure(images.iter().cloned());
    if sub.dim() < p.dim() {
        return Ok(p.to_module().quotient(&sub));
    }
    // Everything was killed: keep only the relations inside the radical.
    let kept = images.into_iter().zip(in_radical).filter(|(_, r)| *r).map(|(x, _)| x);
    let sub = p.submodule_closure(kept);
    Ok(p.to_module().quotient(&sub))
}

fn apply_expr_sum<F: Field>(p: &ProjectiveSum<F>, e: &Expr<F>, v: &[F::Elem]) -> Vec<F::Elem> {
    let f = p.ring().field();
    let mut out = vec![f.zero(); v.len()];
    for (c, word) in &e.terms {
        let mut w = v.to_vec();
        for &g in word.iter().rev() {
            w = p.apply_generator(g, &w);
        }
        add_scaled_vec(f, &mut out, c, &w);
    }
    out
}

/// Submodule generated by up to `max_gens` seeded random vectors; the
/// count may be zero, and random vectors often generate everything.
pub fn random_submodule<F: Field>(m: &LeftModule<F>, seed: u64, max_gens: usize) -> Subspace<F> {
    let f = m.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let k = rng.gen_range(0..=max_gens);
    let rad = m.radical().unwrap_or_else(|_| Subspace::new(f, m.dim()));
    let vectors: Vec<Vec<F::Elem>> = (0..k)
        .map(|_| {
            let v: Vec<F::Elem> = (0..m.dim()).map(|_| f.sample_small(&mut rng)).collect();
            // Half the time stay inside the radical to get proper submodules.
            if rng.gen_bool(0.5) && rad.dim() > 0 {
                let coords: Vec<F::Elem> = (0..rad.dim()).map(|_| f.sample_small(&mut rng)).collect();
                rad.combine(&coords)
            } else {
                v
            }
        })
        .collect();
    m.submodule_closure(vectors)
}

/// The rings attached to an extension `B ⊆ A`, built once so that modules
/// over the same ring share cached projectives.
#[derive(Debug)]
pub struct ExtensionRings<F: Field> {
    pub embedding: SubalgebraEmbedding<F>,
    pub a: Arc<Ring<F>>,
    pub a_op: Arc<Ring<F>>,
    pub b: Arc<Ring<F>>,
    pub b_op: Arc<Ring<F>>,
    /// `B (x) B^op`: `B`-bimodules.
    pub b_env: Arc<Ring<F>>,
    /// `A (x) B^op`: `(A, B)`-bimodules.
    pub a_b: Arc<Ring<F>>,
    /// `B (x) A^op`: `(B, A)`-bimodules.
    pub b_a: Arc<Ring<F>>,
}

impl<F: Field> ExtensionRings<F> {
    pub fn new(embedding: SubalgebraEmbedding<F>) -> Self {
        let a = Ring::basic(Arc::clone(&embedding.big));
        let a_op = Ring::basic(embedding.big.opposite());
        let b = Ring::basic(Arc::clone(&embedding.small));
        let b_op = Ring::basic(embedding.small.opposite());
        let b_env = Ring::tensor(&b, &b_op);
        let a_b = Ring::tensor(&a, &b_op);
        let b_a = Ring::tensor(&b, &a_op);
        ExtensionRings { embedding, a, a_op, b, b_op, b_env, a_b, b_a }
    }

    fn big(&self) -> &FiniteDimAlgebra<F> {
        &self.embedding.big
    }

    fn small(&self) -> &FiniteDimAlgebra<F> {
        &self.embedding.small
    }

    /// Images in `A` of `B`'s generators.
    pub fn included_generators(&self) -> Vec<Vec<F::Elem>> {
        self.small().generators().iter().map(|g| self.embedding.include(&g.element)).collect()
    }

    /// Expressions in `A`'s generators for `B`'s generators.
    pub fn restriction_exprs(&self) -> Vec<Expr<F>> {
        self.included_generators().iter().map(|x| self.big().element_expr(x)).collect()
    }

    /// Restriction of an `A`-module to `B`.
    pub fn restrict(&self, x: &LeftModule<F>) -> LeftModule<F> {
        x.restrict(&self.b, &self.restriction_exprs())
    }

    /// Restriction of a right `A`-module (left `A^op`) to a right `B`-module.
    pub fn restrict_right(&self, x: &LeftModule<F>) -> LeftModule<F> {
        let a_op = self.embedding.big.opposite();
        let exprs: Vec<Expr<F>> = self.included_generators().iter().map(|e| a_op.element_expr(e)).collect();
        x.restrict(&self.b_op, &exprs)
    }

    /// `A` as an `(A, B)`-bimodule.
    pub fn a_as_bimodule(&self) -> LeftModule<F> {
        let a = self.big();
        let mut actions: Vec<Matrix<F>> = a.generators().iter().map(|g| a.left_mult_matrix(&g.element)).collect();
        actions.extend(self.included_generators().iter().map(|h| a.right_mult_matrix(h)));
        LeftModule { ring: Arc::clone(&self.a_b), dim: a.dim(), actions }
    }

    /// `A` as a `B`-bimodule.
    pub fn a_as_b_bimodule(&self) -> LeftModule<F> {
        let a = self.big();
        let inc = self.included_generators();
        let mut actions: Vec<Matrix<F>> = inc.iter().map(|g| a.left_mult_matrix(g)).collect();
        actions.extend(inc.iter().map(|h| a.right_mult_matrix(h)));
        LeftModule { ring: Arc::clone(&self.b_env), dim: a.dim(), actions }
    }

    /// The image of `B` inside `A`.
    pub fn b_subspace(&self) -> Subspace<F> {
        Subspace::from_matrix_rows(&self.embedding.inclusion)
    }

    /// `A/B` as a `B`-bimodule.
    pub fn quotient_bimodule(&self) -> LeftModule<F> {
        self.a_as_b_bimodule().quotient(&self.b_subspace())
    }

    /// The projection `A -> A/B` in the bases used by `a_as_bimodule` and
    /// `quotient_bimodule`.
    pub fn quotient_projection(&self) -> Matrix<F> {
        let b = self.b_subspace();
        let free = b.free_columns();
        let f = self.big().field();
        let cols: Vec<Vec<F::Elem>> =
            (0..self.big().dim()).map(|i| b.quotient_coords(&unit_vector(f, self.big().dim(), i), &free)).collect();
        Matrix::from_columns(f, free.len(), &cols)
    }

    /// `A/B` with the right action of `A`... restricted: `A/B` as a
    /// `(B, B)`-bimodule viewed as a right `B`-module.
    pub fn quotient_right(&self) -> LeftModule<F> {
        self.quotient_bimodule().right_part()
    }

    pub fn quotient_left(&self) -> LeftModule<F> {
        self.quotient_bimodule().left_part()
    }

    /// `A` as a right `B`-module.
    pub fn a_right(&self) -> LeftModule<F> {
        self.a_as_bimodule().right_part()
    }

    /// `A` as a left `B`-module.
    pub fn a_left(&self) -> LeftModule<F> {
        self.a_as_b_bimodule().left_part()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::dual_numbers;
    use crate::field::{PrimeField, Rationals};
    use crate::presentation::parse_presentation;
    use crate::quiver::BoundQuiverAlgebra;

    fn ring_of(text: &str) -> Arc<Ring<PrimeField>> {
        let pres = parse_presentation(text).unwrap();
        let a = BoundQuiverAlgebra::build(&PrimeField::new(1009).unwrap(), &pres).unwrap();
        Ring::basic(Arc::clone(a.algebra()))
    }

    const A2: &str = "vertex 1 2\narrow a: 1 -> 2\ncap 2";

    #[test]
    fn projectives_of_small_algebras() {
        let k = ring_of("vertex v\ncap 2");
        assert_eq!(k.projectives().unwrap().len(), 1);
        assert_eq!(k.projectives().unwrap()[0].dim, 1);
        let d = ring_of("vertex v\narrow x: v -> v\nrelation x.x\ncap 2");
        assert_eq!(d.projectives().unwrap()[0].dim, 2);
        for p in d.projectives().unwrap() {
            let m = LeftModule { ring: Arc::clone(&d), dim: p.dim, actions: p.actions.clone() };
            m.validate().unwrap();
        }
    }

    #[test]
    fn cover_of_projective_is_iso() {
        let r = ring_of(A2);
        for v in 0..2 {
            let p = LeftModule::projective(&r, v).unwrap();
            let c = projective_cover(&p).unwrap();
            assert_eq!(c.projective.dim(), p.dim());
            assert_eq!(c.epi.rank(), p.dim());
            assert_eq!(projective_dimension(&p, 5).unwrap(), PdStatus::Finite(0));
        }
    }

    #[test]
    fn simple_cover_and_zero_module() {
        let r = ring_of(A2);
        let s = LeftModule::simple(&r, 0).unwrap();
        assert_eq!(s.dim(), 1);
        let c = projective_cover(&s).unwrap();
        assert_eq!(c.projective.summands(), &[0]);
        let z = LeftModule::zero(&r);
        assert_eq!(projective_cover(&z).unwrap().projective.dim(), 0);
        assert_eq!(projective_dimension(&z, 3).unwrap(), PdStatus::Zero);
        // one simple of the A2 path algebra has pd 1, the other 0
        let pds: Vec<PdStatus> = (0..2).map(|v| projective_dimension(&LeftModule::simple(&r, v).unwrap(), 5).unwrap()).collect();
        assert!(pds.contains(&PdStatus::Finite(1)) && pds.contains(&PdStatus::Finite(0)));
    }

    #[test]
    fn dual_numbers_simple_is_its_own_syzygy() {
        let q = Rationals;
        let r = Ring::basic(Arc::new(dual_numbers(&q)));
        let s = LeftModule::simple(&r, 0).unwrap();
        let omega = syzygy(&s).unwrap();
        assert!(omega.same_actions(&s));
        for cutoff in [1, 3, 7] {
            assert_eq!(projective_dimension(&s, cutoff).unwrap(), PdStatus::AtLeast(cutoff));
        }
        let res = minimal_resolution(&s, 4).unwrap();
        assert!(res.exactness().is_exact(), "truncated resolution is exact up to the last syzygy");
        assert!(res.is_minimal());
    }

    #[test]
    fn exactness_of_trivial_complexes() {
        let f = PrimeField::new(7).unwrap();
        let id = Matrix::identity(&f, 2);
        assert!(exactness_check(&[id]).is_exact());
        let zero = Matrix::zeros(&f, 2, 2);
        let rep = exactness_check(&[zero]);
        assert!(!rep.is_exact());
        assert_eq!(rep.first_failure(), Some(0));
    }

    #[test]
    fn random_modules_are_valid_and_deterministic() {
        let r = ring_of("vertex 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation a.b.a\nrelation b.a.b\ncap 3");
        for seed in 0..20 {
            let m = random_module(&r, seed, RandomBounds::default()).unwrap();
            m.validate().unwrap();
            let again = random_module(&r, seed, RandomBounds::default()).unwrap();
            assert!(m.same_actions(&again));
            let sub = random_submodule(&m, seed, 2);
            assert!(m.is_submodule(&sub));
        }
        let z = random_module(&r, 3, RandomBounds { max_summands: 0, max_relations: 2 }).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn pd_interval_order() {
        use PdStatus::*;
        assert_eq!(Zero.le(Finite(0)), Some(true));
        assert_eq!(Finite(2).le(AtLeast(3)), Some(true));
        assert_eq!(Finite(4).le(AtLeast(3)), None);
        assert_eq!(AtLeast(3).le(Finite(2)), Some(false));
        assert_eq!(AtLeast(3).le(Finite(5)), None);
        assert_eq!(Finite(1).max(AtLeast(3)), AtLeast(3));
    }
}

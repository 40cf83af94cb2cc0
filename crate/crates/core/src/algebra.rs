//! Finite-dimensional algebras given by structure constants.
//!
//! Besides the multiplication table every algebra carries a list of
//! generators together with, for each basis element, a word in those
//! generators whose product is that basis element. Modules only store the
//! action of the generators; any other element acts through its word.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::AlgebraError;
use crate::field::Field;
use crate::linalg::{add_scaled_vec, is_zero_vec, unit_vector, CoordinateSystem, Matrix, Subspace};

/// A linear combination of words in an algebra's generators. The word
/// `[g1, g2, g3]` denotes the product `g1 * g2 * g3`; the empty word is 1.
#[derive(Clone)]
pub struct Expr<F: Field> {
    pub terms: Vec<(F::Elem, Vec<usize>)>,
}

impl<F: Field> fmt::Debug for Expr<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(c, w)| format!("{c}*{w:?}")).collect();
        write!(f, "Expr({})", parts.join(" + "))
    }
}

impl<F: Field> Expr<F> {
    pub fn zero() -> Self {
        Expr { terms: Vec::new() }
    }

    pub fn letter(field: &F, g: usize) -> Self {
        Expr { terms: vec![(field.one(), vec![g])] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn product(&self, other: &Self, field: &F) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                terms.push((field.mul(a, b), w));
            }
        }
        Expr { terms }
    }

    /// Shift every letter by `offset` (embedding a factor's generators into a
    /// tensor product).
    pub fn shifted(&self, offset: usize) -> Self {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (c.clone(), w.iter().map(|g| g + offset).collect()))
                .collect(),
        }
    }

    /// The single generator this expression consists of, if any.
    pub fn as_letter(&self, field: &F) -> Option<usize> {
        match self.terms.as_slice() {
            [(c, w)] if w.len() == 1 && field.is_one(c) => Some(w[0]),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generator<F: Field> {
    pub label: String,
    pub element: Vec<F::Elem>,
}

/// A primitive idempotent, labelled by the vertex it corresponds to.
#[derive(Clone, Debug)]
pub struct Vertex<F: Field> {
    pub label: String,
    pub idempotent: Vec<F::Elem>,
}

type Product<F> = Vec<(usize, <F as Field>::Elem)>;

pub struct FiniteDimAlgebra<F: Field> {
    field: F,
    labels: Vec<String>,
    table: Vec<Product<F>>,
    unit: Vec<F::Elem>,
    generators: Vec<Generator<F>>,
    words: Vec<Vec<usize>>,
    given_vertices: Option<Vec<Vertex<F>>>,
    monomial: bool,
    radical: OnceLock<Result<Subspace<F>, AlgebraError>>,
    vertices: OnceLock<Result<Vec<Vertex<F>>, AlgebraError>>,
    opposite: OnceLock<Arc<FiniteDimAlgebra<F>>>,
}

impl<F: Field> fmt::Debug for FiniteDimAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteDimAlgebra(dim {}, {} generators over {})",
            self.dim(),
            self.generators.len(),
            self.field.spec()
        )
    }
}

impl<F: Field> FiniteDimAlgebra<F> {
    /// Algebra from a full table: `table[i][j]` is the coordinate vector of
    /// `b_i * b_j`. Checks associativity and the unit. Generators default to
    /// the basis itself.
    pub fn from_table(
        field: &F,
        labels: Vec<String>,
        table: Vec<Vec<Vec<F::Elem>>>,
        unit: Vec<F::Elem>,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if table.len() != n || unit.len() != n {
            return Err(AlgebraError::Invalid("table size does not match basis".into()));
        }
        let mut sparse = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(AlgebraError::Invalid("table size does not match basis".into()));
            }
            for prod in row {
                if prod.len() != n {
                    return Err(AlgebraError::Invalid("product vector has the wrong length".into()));
                }
                sparse.push(to_sparse(field, prod));
            }
        }
        let alg = Self::from_sparse(field, labels, sparse, unit);
        alg.check_associative()?;
        alg.check_unit()?;
        Ok(alg)
    }

    pub(crate) fn from_sparse(
        field: &F,
        labels: Vec<String>,
        table: Vec<Product<F>>,
        unit: Vec<F::Elem>,
    ) -> Self {
        let n = labels.len();
        let generators = (0..n)
            .map(|i| Generator { label: labels[i].clone(), element: unit_vector(field, n, i) })
            .collect();
        let words = (0..n).map(|i| vec![i]).collect();
        FiniteDimAlgebra {
            field: field.clone(),
            labels,
            table,
            unit,
            generators,
            words,
            given_vertices: None,
            monomial: false,
            radical: OnceLock::new(),
            vertices: OnceLock::new(),
            opposite: OnceLock::new(),
        }
    }

    /// Replace the generating set. `words[k]` must multiply out to basis
    /// element `k`.
    pub fn with_generators(mut self, generators: Vec<Generator<F>>, words: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        if words.len() != self.dim() {
            return Err(AlgebraError::Invalid("need one word per basis element".into()));
        }
        for (k, w) in words.iter().enumerate() {
            let mut acc = self.unit.clone();
            for &g in w {
                let gen = generators
                    .get(g)
                    .ok_or_else(|| AlgebraError::Invalid(format!("word for basis element {k} uses unknown generator {g}")))?;
                acc = self.mul(&acc, &gen.element);
            }
            if acc != unit_vector(&self.field, self.dim(), k) {
                return Err(AlgebraError::Invalid(format!(
                    "word for basis element `{}` does not multiply out to it",
                    self.labels[k]
                )));
            }
        }
        self.generators = generators;
        self.words = words;
        Ok(self)
    }

    /// Declare a complete set of primitive orthogonal idempotents. They are
    /// validated lazily, the first time vertices are requested.
    pub fn with_vertices(mut self, vertices: Vec<Vertex<F>>) -> Self {
        self.given_vertices = Some(vertices);
        self
    }

    pub fn with_monomial(mut self, monomial: bool) -> Self {
        self.monomial = monomial;
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &[F::Elem] {
        &self.unit
    }
    pub fn generators(&self) -> &[Generator<F>] {
        &self.generators
    }
    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }
    pub fn is_monomial(&self) -> bool {
        self.monomial
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, F::Elem)] {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F::Elem> {
        unit_vector(&self.field, self.dim(), i)
    }

    pub fn zero_element(&self) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn mul(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let n = self.dim();
        let mut out = vec![f.zero(); n];
        let ys: Vec<usize> = (0..n).filter(|&j| !f.is_zero(&y[j])).collect();
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for &j in &ys {
                let c = f.mul(xi, &y[j]);
                for (k, s) in self.basis_product(i, j) {
                    f.mul_add_assign(&mut out[*k], &c, s);
                }
            }
        }
        out
    }

    /// Matrix of `y -> x y`.
    pub fn left_mult_matrix(&self, x: &[F::Elem]) -> Matrix<F> {
        let cols: Vec<Vec<F::Elem>> = (0..self.dim()).map(|j| self.mul(x, &self.basis_vector(j))).collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    /// Matrix of `y -> y x`.
    pub fn right_mult_matrix(&self, x: &[F::Elem]) -> Matrix<F> {
        let cols: Vec<Vec<F::Elem>> = (0..self.dim()).map(|j| self.mul(&self.basis_vector(j), x)).collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    /// Expression of an element as a combination of basis words.
    pub fn element_expr(&self, x: &[F::Elem]) -> Expr<F> {
        Expr {
            terms: x
                .iter()
                .enumerate()
                .filter(|(_, c)| !self.field.is_zero(c))
                .map(|(k, c)| (c.clone(), self.words[k].clone()))
                .collect(),
        }
    }

    /// Multiply out an expression in the generators.
    pub fn eval_expr(&self, e: &Expr<F>) -> Vec<F::Elem> {
        let mut out = self.zero_element();
        for (c, w) in &e.terms {
            let mut acc = self.unit.clone();
            for &g in w.iter().rev() {
                acc = self.mul(&self.generators[g].element, &acc);
            }
            add_scaled_vec(&self.field, &mut out, c, &acc);
        }
        out
    }

    pub fn is_idempotent(&self, x: &[F::Elem]) -> bool {
        self.mul(x, x) == x
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    pub fn check_associative(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = sparse_to_dense(&self.field, n, self.basis_product(i, j));
                for k in 0..n {
                    let left = self.mul(&ij, &self.basis_vector(k));
                    let jk = sparse_to_dense(&self.field, n, self.basis_product(j, k));
                    let right = self.mul(&self.basis_vector(i), &jk);
                    if left != right {
                        return Err(AlgebraError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim() {
            let b = self.basis_vector(i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(AlgebraError::Invalid("unit is not a two-sided identity".into()));
            }
        }
        Ok(())
    }

    /// Characteristic must be 0 or exceed the dimension for the trace-form
    /// radical to be correct.
    pub fn check_characteristic(&self) -> Result<(), AlgebraError> {
        let p = self.field.spec().characteristic();
        if p != 0 && p as usize <= self.dim() {
            return Err(AlgebraError::FieldTooSmall { characteristic: p, dim: self.dim() });
        }
        Ok(())
    }

    /// Jacobson radical as the kernel of the trace form `(x, y) -> tr(L_{xy})`.
    pub fn radical(&self) -> Result<&Subspace<F>, AlgebraError> {
        self.radical
            .get_or_init(|| self.compute_radical())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_radical(&self) -> Result<Subspace<F>, AlgebraError> {
        self.check_characteristic()?;
        let f = &self.field;
        let n = self.dim();
        // tr(L_{b_k}) = sum_m (coefficient of b_m in b_k b_m)
        let traces: Vec<F::Elem> = (0..n)
            .map(|k| {
                let mut t = f.zero();
                for m in 0..n {
                    for (idx, c) in self.basis_product(k, m) {
                        if *idx == m {
                            t = f.add(&t, c);
                        }
                    }
                }
                t
            })
            .collect();
        // Gram matrix G[j][i] = tr(L_{b_i b_j}); the radical is ker G.
        let mut gram = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                let mut t = f.zero();
                for (k, c) in self.basis_product(i, j) {
                    f.mul_add_assign(&mut t, c, &traces[k.to_owned()]);
                }
                gram.set(j, i, t);
            }
        }
        let rad = Subspace::from_matrix_rows(&gram.kernel_basis());
        for r in rad.basis() {
            for k in 0..n {
                let b = self.basis_vector(k);
                if !rad.contains(&self.mul(r, &b)) || !rad.contains(&self.mul(&b, r)) {
                    return Err(AlgebraError::Invalid("trace-form kernel is not an ideal".into()));
                }
            }
        }
        Ok(rad)
    }

    /// Elements spanning a complement of rad^2 in rad. They generate the
    /// radical both as a left and as a right ideal.
    pub fn radical_generators(&self) -> Result<Vec<Vec<F::Elem>>, AlgebraError> {
        let rad = self.radical()?;
        let mut span = Subspace::new(&self.field, self.dim());
        for a in rad.basis() {
            for b in rad.basis() {
                span.insert(self.mul(a, b));
            }
        }
        Ok(rad.basis().iter().filter(|r| span.insert((*r).clone())).cloned().collect())
    }

    /// Subspace spanned by products of `k` radical elements.
    pub fn radical_power(&self, k: usize) -> Result<Subspace<F>, AlgebraError> {
        let rad = self.radical()?.clone();
        let mut power = rad.clone();
        for _ in 1..k {
            let mut next = Subspace::new(&self.field, self.dim());
            for a in power.basis() {
                for r in rad.basis() {
                    next.insert(self.mul(a, r));
                }
            }
            power = next;
        }
        Ok(power)
    }

    /// Quotient by a two-sided ideal; the basis is indexed by the ideal's free
    /// columns. Generators and words are inherited.
    pub fn quotient(&self, ideal: &Subspace<F>) -> FiniteDimAlgebra<F> {
        let f = &self.field;
        let free = ideal.free_columns();
        let m = free.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &free {
            for &b in &free {
                let prod = sparse_to_dense(f, self.dim(), self.basis_product(a, b));
                table.push(to_sparse(f, &ideal.quotient_coords(&prod, &free)));
            }
        }
        let labels = free.iter().map(|&c| self.labels[c].clone()).collect();
        let unit = ideal.quotient_coords(&self.unit, &free);
        let mut q = FiniteDimAlgebra::from_sparse(f, labels, table, unit);
        q.generators = self
            .generators
            .iter()
            .map(|g| Generator { label: g.label.clone(), element: ideal.quotient_coords(&g.element, &free) })
            .collect();
        // A basis representative's word still multiplies out to it modulo the ideal.
        q.words = free.iter().map(|&c| self.words[c].clone()).collect();
        debug_assert!(q.words.iter().enumerate().all(|(k, w)| {
            let e = q.eval_expr(&Expr { terms: vec![(f.one(), w.clone())] });
            e == unit_vector(f, m, k)
        }));
        q
    }

    /// Complete set of primitive orthogonal idempotents. Uses the declared
    /// vertices when present, otherwise lifts idempotents from the
    /// semisimple quotient.
    pub fn primitive_idempotents(&self) -> Result<&[Vertex<F>], AlgebraError> {
        self.vertices
            .get_or_init(|| match &self.given_vertices {
                Some(v) => self.validate_vertices(v).map(|_| v.clone()),
                None => self.lift_idempotents(),
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    fn validate_vertices(&self, vertices: &[Vertex<F>]) -> Result<(), AlgebraError> {
        let f = &self.field;
        let mut sum = self.zero_element();
        for (i, u) in vertices.iter().enumerate() {
            if !self.is_idempotent(&u.idempotent) {
                return Err(AlgebraError::NotSplitBasic(format!("`{}` is not idempotent", u.label)));
            }
            for v in &vertices[i + 1..] {
                if !is_zero_vec(f, &self.mul(&u.idempotent, &v.idempotent))
                    || !is_zero_vec(f, &self.mul(&v.idempotent, &u.idempotent))
                {
                    return Err(AlgebraError::NotSplitBasic(format!(
                        "`{}` and `{}` are not orthogonal",
                        u.label, v.label
                    )));
                }
            }
            add_scaled_vec(f, &mut sum, &f.one(), &u.idempotent);
        }
        if sum != self.unit {
            return Err(AlgebraError::NotSplitBasic("idempotents do not sum to 1".into()));
        }
        let rad = self.radical()?;
        if self.dim() - rad.dim() != vertices.len() {
            return Err(AlgebraError::NotSplitBasic(format!(
                "semisimple quotient has dimension {} but there are {} idempotents",
                self.dim() - rad.dim(),
                vertices.len()
            )));
        }
        if let Some(u) = vertices.iter().find(|u| rad.contains(&u.idempotent)) {
            return Err(AlgebraError::NotSplitBasic(format!("`{}` lies in the radical", u.label)));
        }
        Ok(())
    }

    fn lift_idempotents(&self) -> Result<Vec<Vertex<F>>, AlgebraError> {
        let f = &self.field;
        let rad = self.radical()?.clone();
        let free = rad.free_columns();
        let semisimple = self.quotient(&rad);
        if !semisimple.is_commutative() {
            return Err(AlgebraError::NotSplitBasic("semisimple quotient is not commutative".into()));
        }
        let quotient_idempotents = split_commutative_semisimple(&semisimple)?;
        let embed = |coords: &[F::Elem]| -> Vec<F::Elem> {
            let mut v = self.zero_element();
            for (c, &col) in coords.iter().zip(&free) {
                v[col] = c.clone();
            }
            v
        };
        let count = quotient_idempotents.len();
        let mut lifted: Vec<Vec<F::Elem>> = Vec::with_capacity(count);
        let mut complement = self.unit.clone();
        for (i, e) in quotient_idempotents.iter().enumerate() {
            if i + 1 == count {
                lifted.push(complement.clone());
                break;
            }
            let x = embed(e);
            let corner = self.mul(&self.mul(&complement, &x), &complement);
            let idem = newton_idempotent(self, corner)?;
            for (c, d) in complement.iter_mut().zip(&idem) {
                *c = f.sub(c, d);
            }
            lifted.push(idem);
        }
        let vertices: Vec<Vertex<F>> = lifted
            .into_iter()
            .enumerate()
            .map(|(i, idempotent)| Vertex { label: format!("v{i}"), idempotent })
            .collect();
        self.validate_vertices(&vertices)?;
        Ok(vertices)
    }

    /// Opposite algebra: same basis and generators, reversed products and words.
    pub fn opposite(self: &Arc<Self>) -> Arc<Self> {
        self.opposite
            .get_or_init(|| {
                let n = self.dim();
                let mut table = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        table.push(self.basis_product(j, i).to_vec());
                    }
                }
                let mut op = FiniteDimAlgebra::from_sparse(&self.field, self.labels.clone(), table, self.unit.clone());
                op.generators = self.generators.clone();
                op.words = self.words.iter().map(|w| w.iter().rev().copied().collect()).collect();
                op.given_vertices = self.given_vertices.clone();
                if op.given_vertices.is_none() {
                    if let Ok(v) = self.primitive_idempotents() {
                        op.given_vertices = Some(v.to_vec());
                    }
                }
                op.monomial = self.monomial;
                Arc::new(op)
            })
            .clone()
    }

    /// Whether `other` has this algebra's multiplication reversed on the same basis.
    pub fn is_opposite_of(&self, other: &Self) -> bool {
        let n = self.dim();
        n == other.dim()
            && (0..n).all(|i| (0..n).all(|j| self.basis_product(i, j) == other.basis_product(j, i)))
    }

    /// `B (x) B^op` as an explicit structure-constant algebra of dimension
    /// `dim^2`, basis `b_i (x) b_j^op` at index `i * dim + j`. Generators are
    /// `g (x) 1` followed by `1 (x) g^op`.
    pub fn enveloping(&self) -> FiniteDimAlgebra<F> {
        let f = &self.field;
        let n = self.dim();
        let nn = n * n;
        let mut table = Vec::with_capacity(nn * nn);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        // (b_i (x) b_j^op)(b_k (x) b_l^op) = b_i b_k (x) (b_l b_j)^op
                        let mut prod: Vec<(usize, F::Elem)> = Vec::new();
                        for (a, ca) in self.basis_product(i, k) {
                            for (b, cb) in self.basis_product(l, j) {
                                prod.push((a * n + b, f.mul(ca, cb)));
                            }
                        }
                        prod.sort_by_key(|(idx, _)| *idx);
                        table.push(prod);
                    }
                }
            }
        }
        let labels: Vec<String> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| format!("{}⊗{}", self.labels[i], self.labels[j]))
            .collect();
        let unit = kron_vec(f, &self.unit, &self.unit);
        let mut env = FiniteDimAlgebra::from_sparse(f, labels, table, unit.clone());
        let g = self.generators.len();
        let mut generators = Vec::with_capacity(2 * g);
        for gen in &self.generators {
            generators.push(Generator { label: format!("{}⊗1", gen.label), element: kron_vec(f, &gen.element, &self.unit) });
        }
        for gen in &self.generators {
            generators.push(Generator { label: format!("1⊗{}", gen.label), element: kron_vec(f, &self.unit, &gen.element) });
        }
        env.generators = generators;
        env.words = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let mut w = self.words[i].clone();
                w.extend(self.words[j].iter().rev().map(|h| h + g));
                w
            })
            .collect();
        if let Ok(vs) = self.primitive_idempotents() {
            let mut vertices = Vec::new();
            for u in vs {
                for v in vs {
                    vertices.push(Vertex {
                        label: pair_label(&u.label, &v.label),
                        idempotent: kron_vec(f, &u.idempotent, &v.idempotent),
                    });
                }
            }
            env.given_vertices = Some(vertices);
        }
        env
    }

    /// Smallest subalgebra containing the generators and 1. Fails with
    /// `NotUnital` when 1 is not reached, unless `adjoin_unit` is set.
    pub fn subalgebra_closure(
        self: &Arc<Self>,
        gens: Vec<Generator<F>>,
        adjoin_unit: bool,
    ) -> Result<SubalgebraEmbedding<F>, AlgebraError> {
        let f = &self.field;
        let n = self.dim();
        let mut span = Subspace::new(f, n);
        let mut basis: Vec<(Vec<F::Elem>, Vec<usize>)> = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            if g.element.len() != n {
                return Err(AlgebraError::Invalid(format!("generator `{}` has the wrong length", g.label)));
            }
            if span.insert(g.element.clone()) {
                basis.push((g.element.clone(), vec![gi]));
            }
        }
        let mut next = 0;
        while next < basis.len() {
            let (elem, word) = basis[next].clone();
            for (gi, g) in gens.iter().enumerate() {
                let prod = self.mul(&g.element, &elem);
                if span.insert(prod.clone()) {
                    let mut w = vec![gi];
                    w.extend_from_slice(&word);
                    basis.push((prod, w));
                }
            }
            next += 1;
        }
        if !span.contains(&self.unit) {
            if !adjoin_unit {
                return Err(AlgebraError::NotUnital);
            }
            span.insert(self.unit.clone());
            basis.push((self.unit.clone(), Vec::new()));
        }

        let vectors: Vec<Vec<F::Elem>> = basis.iter().map(|(v, _)| v.clone()).collect();
        let coords = CoordinateSystem::new(f, n, &vectors).expect("closure basis is independent");
        let m = vectors.len();
        let mut table = Vec::with_capacity(m * m);
        for a in &vectors {
            for b in &vectors {
                let c = coords.coords(&self.mul(a, b)).ok_or_else(|| {
                    AlgebraError::Invalid("closure is not closed under multiplication".into())
                })?;
                table.push(to_sparse(f, &c));
            }
        }
        let labels: Vec<String> = basis.iter().map(|(_, w)| word_label(&gens, w)).collect();
        let unit = coords.coords(&self.unit).expect("unit in closure");
        let mut small = FiniteDimAlgebra::from_sparse(f, labels, table, unit);
        small.generators = gens
            .iter()
            .map(|g| Generator { label: g.label.clone(), element: coords.coords(&g.element).expect("generator in closure") })
            .collect();
        small.words = basis.iter().map(|(_, w)| w.clone()).collect();

        // Prefer idempotent generators as vertices when they form a complete
        // orthogonal set.
        let idempotent_gens: Vec<Vertex<F>> = small
            .generators
            .iter()
            .filter(|g| !is_zero_vec(f, &g.element) && small.is_idempotent(&g.element))
            .map(|g| Vertex { label: g.label.clone(), idempotent: g.element.clone() })
            .collect();
        if !idempotent_gens.is_empty() && small.validate_vertices(&idempotent_gens).is_ok() {
            small.given_vertices = Some(idempotent_gens);
        }

        Ok(SubalgebraEmbedding {
            big: Arc::clone(self),
            small: Arc::new(small),
            inclusion: Matrix::from_rows(f, n, vectors),
        })
    }
}

/// A unital subalgebra `B` of `A`, with `B`'s basis written in `A`'s basis
/// (rows of `inclusion`).
#[derive(Clone, Debug)]
pub struct SubalgebraEmbedding<F: Field> {
    pub big: Arc<FiniteDimAlgebra<F>>,
    pub small: Arc<FiniteDimAlgebra<F>>,
    pub inclusion: Matrix<F>,
}

impl<F: Field> SubalgebraEmbedding<F> {
    /// Image in `A` of an element of `B`.
    pub fn include(&self, b: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.big.field();
        let mut out = self.big.zero_element();
        for (c, k) in b.iter().zip(0..self.inclusion.rows()) {
            add_scaled_vec(f, &mut out, c, self.inclusion.row(k));
        }
        out
    }

    pub fn codimension(&self) -> usize {
        self.big.dim() - self.small.dim()
    }

    /// The inclusion is injective, multiplicative and unital.
    pub fn check(&self) -> bool {
        let f = self.big.field();
        let n = self.small.dim();
        if self.inclusion.rank() != n || self.include(self.small.unit()) != self.big.unit() {
            return false;
        }
        (0..n).all(|i| {
            (0..n).all(|j| {
                let bij = sparse_to_dense(f, n, self.small.basis_product(i, j));
                self.include(&bij)
                    == self.big.mul(&self.include(&self.small.basis_vector(i)), &self.include(&self.small.basis_vector(j)))
            })
        })
    }
}

pub fn pair_label(a: &str, b: &str) -> String {
    format!("X({a},{b})")
}

fn word_label<F: Field>(gens: &[Generator<F>], w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|&g| gens[g].label.as_str()).collect::<Vec<_>>().join(".")
}

pub(crate) fn to_sparse<F: Field>(field: &F, v: &[F::Elem]) -> Product<F> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub(crate) fn sparse_to_dense<F: Field>(field: &F, n: usize, s: &[(usize, F::Elem)]) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); n];
    for (i, c) in s {
        v[*i] = c.clone();
    }
    v
}

pub(crate) fn kron_vec<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(field.mul(x, y));
        }
    }
    out
}

/// `e <- 3e^2 - 2e^3` until `e^2 = e`.
fn newton_idempotent<F: Field>(alg: &FiniteDimAlgebra<F>, mut e: Vec<F::Elem>) -> Result<Vec<F::Elem>, AlgebraError> {
    let f = alg.field();
    let three = f.from_i64(3);
    let two = f.from_i64(2);
    for _ in 0..64 {
        let e2 = alg.mul(&e, &e);
        if e2 == e {
            return Ok(e);
        }
        let e3 = alg.mul(&e2, &e);
        e = e2.iter().zip(&e3).map(|(a, b)| f.sub(&f.mul(&three, a), &f.mul(&two, b))).collect();
    }
    Err(AlgebraError::NotSplitBasic("idempotent lifting did not converge".into()))
}

/// Primitive idempotents of a commutative semisimple algebra that splits
/// over the ground field, via the eigenvalues of a separating element.
fn split_commutative_semisimple<F: Field>(s: &FiniteDimAlgebra<F>) -> Result<Vec<Vec<F::Elem>>, AlgebraError> {
    let f = s.field();
    let n = s.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![s.unit().to_vec()]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for attempt in 0..40 {
        let x: Vec<F::Elem> = if attempt < n {
            s.basis_vector(attempt)
        } else {
            (0..n).map(|_| f.from_i64(rng.gen_range(-50..=50))).collect()
        };
        let Some(poly) = minimal_polynomial(s, &x) else { continue };
        if poly.len() != n + 1 {
            continue;
        }
        let roots = distinct_roots(f, &poly);
        if roots.len() != n {
            continue;
        }
        let mut idempotents = Vec::with_capacity(n);
        for (i, lambda) in roots.iter().enumerate() {
            let mut e = s.unit().to_vec();
            for (j, mu) in roots.iter().enumerate() {
                if i == j {
                    continue;
                }
                let denom = f.inv(&f.sub(lambda, mu)).expect("distinct roots");
                let mut factor = x.clone();
                add_scaled_vec(f, &mut factor, &f.neg(mu), s.unit());
                let factor: Vec<F::Elem> = factor.iter().map(|c| f.mul(c, &denom)).collect();
                e = s.mul(&e, &factor);
            }
            idempotents.push(e);
        }
        return Ok(idempotents);
    }
    Err(AlgebraError::NotSplitBasic(
        "semisimple quotient does not split into copies of the ground field".into(),
    ))
}

/// Coefficients (constant term first, monic) of the minimal polynomial of `x`.
fn minimal_polynomial<F: Field>(s: &FiniteDimAlgebra<F>, x: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let f = s.field();
    let n = s.dim();
    let mut powers: Vec<Vec<F::Elem>> = vec![s.unit().to_vec()];
    loop {
        let next = s.mul(powers.last().unwrap(), x);
        // Solve next = sum c_i powers[i].
        let basis = Matrix::from_columns(f, n, &powers);
        let rhs = Matrix::from_columns(f, n, std::slice::from_ref(&next));
        if let Some(sol) = basis.solve(&rhs) {
            let mut poly: Vec<F::Elem> = (0..powers.len()).map(|i| f.neg(sol.get(i, 0))).collect();
            poly.push(f.one());
            return Some(poly);
        }
        powers.push(next);
        if powers.len() > n + 1 {
            return None;
        }
    }
}

fn eval_poly<F: Field>(f: &F, poly: &[F::Elem], x: &F::Elem) -> F::Elem {
    let mut acc = f.zero();
    for c in poly.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

/// Roots in the ground field. Prime fields are searched exhaustively; over
/// the rationals candidates come from the rational root theorem.
fn distinct_roots<F: Field>(f: &F, poly: &[F::Elem]) -> Vec<F::Elem> {
    let p = f.spec().characteristic();
    if p != 0 {
        return (0..p as i64)
            .map(|v| f.from_i64(v))
            .filter(|v| f.is_zero(&eval_poly(f, poly, v)))
            .collect();
    }
    // Clear denominators: the coefficients print as `a/b` or `a`.
    let coeffs: Vec<(BigInt, BigInt)> = poly.iter().map(|c| parse_fraction(&c.to_string())).collect();
    let lcm = coeffs.iter().fold(BigInt::from(1), |acc, (_, d)| num_integer::lcm(acc, d.clone()));
    let ints: Vec<BigInt> = coeffs.iter().map(|(a, d)| a * (&lcm / d)).collect();
    let mut roots = Vec::new();
    let mut low = 0;
    while low < ints.len() && ints[low] == BigInt::from(0) {
        low += 1;
    }
    if low > 0 {
        roots.push(f.zero());
    }
    let constant = ints[low].clone();
    let leading = ints.last().unwrap().clone();
    for num in divisors(&constant) {
        for den in divisors(&leading) {
            for sign in [1i64, -1] {
                let Some(cand) = f.from_ratio(&(&num * BigInt::from(sign)), &den) else { continue };
                if f.is_zero(&eval_poly(f, poly, &cand)) && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

fn parse_fraction(s: &str) -> (BigInt, BigInt) {
    match s.split_once('/') {
        Some((a, b)) => (a.parse().unwrap(), b.parse().unwrap()),
        None => (s.parse().unwrap(), BigInt::from(1)),
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    use num_traits::{Signed, Zero};
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    /// k[x]/(x^2) with basis {1, x}.
    pub fn dual_numbers<F: Field>(f: &F) -> FiniteDimAlgebra<F> {
        let one = |i: usize| unit_vector(f, 2, i);
        let zero = vec![f.zero(); 2];
        let table = vec![vec![one(0), one(1)], vec![one(1), zero]];
        FiniteDimAlgebra::from_table(f, vec!["1".into(), "x".into()], table, one(0)).unwrap()
    }

    /// k x k with basis {e1, e2}.
    pub fn two_points<F: Field>(f: &F) -> FiniteDimAlgebra<F> {
        let one = |i: usize| unit_vector(f, 2, i);
        let zero = vec![f.zero(); 2];
        let table = vec![vec![one(0), zero.clone()], vec![zero, one(1)]];
        let unit = vec![f.one(), f.one()];
        FiniteDimAlgebra::from_table(f, vec!["e1".into(), "e2".into()], table, unit).unwrap()
    }

    /// 2x2 matrices, a split but non-basic algebra.
    fn matrices<F: Field>(f: &F) -> FiniteDimAlgebra<F> {
        // basis E11, E12, E21, E22 at index 2r + c; E_ab E_cd = [b == c] E_ad.
        let mut table = vec![vec![vec![f.zero(); 4]; 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        if b == c {
                            table[2 * a + b][2 * c + d][2 * a + d] = f.one();
                        }
                    }
                }
            }
        }
        let mut unit = vec![f.zero(); 4];
        unit[0] = f.one();
        unit[3] = f.one();
        let labels = ["E11", "E12", "E21", "E22"].iter().map(|s| s.to_string()).collect();
        FiniteDimAlgebra::from_table(f, labels, table, unit).unwrap()
    }

    #[test]
    fn radical_of_dual_numbers_is_x() {
        let f = PrimeField::new(1009).unwrap();
        let a = dual_numbers(&f);
        let rad = a.radical().unwrap();
        assert_eq!(rad.dim(), 1);
        assert!(rad.contains(&unit_vector(&f, 2, 1)));
        assert_eq!(a.radical_power(2).unwrap().dim(), 0);
    }

    #[test]
    fn semisimple_has_zero_radical() {
        let a = two_points(&Rationals);
        assert_eq!(a.radical().unwrap().dim(), 0);
    }

    #[test]
    fn field_too_small_is_reported() {
        let f = PrimeField::new(2).unwrap();
        let a = dual_numbers(&f);
        assert_eq!(a.radical().unwrap_err(), AlgebraError::FieldTooSmall { characteristic: 2, dim: 2 });
    }

    #[test]
    fn lifting_finds_idempotents() {
        let q = Rationals;
        let a = two_points(&q);
        let v = a.primitive_idempotents().unwrap();
        assert_eq!(v.len(), 2);
        let d = dual_numbers(&q);
        let v = d.primitive_idempotents().unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].idempotent, d.unit().to_vec());
    }

    #[test]
    fn lifting_through_a_nontrivial_radical() {
        // Upper triangular 2x2 matrices: basis E11, E12, E22; lift from a
        // skewed preimage and check primitivity.
        let f = PrimeField::new(101).unwrap();
        let m = matrices(&f);
        let arc = Arc::new(m);
        let gens = vec![
            Generator { label: "E11".into(), element: unit_vector(&f, 4, 0) },
            Generator { label: "E12".into(), element: unit_vector(&f, 4, 1) },
            Generator { label: "E22".into(), element: unit_vector(&f, 4, 3) },
        ];
        let emb = arc.subalgebra_closure(gens, false).unwrap();
        assert_eq!(emb.small.dim(), 3);
        assert!(emb.check());
        let vs = emb.small.primitive_idempotents().unwrap();
        assert_eq!(vs.len(), 2);
        // the generators E11, E22 are used as vertices
        assert_eq!(vs[0].label, "E11");
        // forget the declared vertices and lift from scratch
        let t = FiniteDimAlgebra::from_sparse(
            &f,
            emb.small.labels().to_vec(),
            emb.small.table.clone(),
            emb.small.unit().to_vec(),
        );
        let lifted = t.primitive_idempotents().unwrap();
        assert_eq!(lifted.len(), 2);
        for v in lifted {
            assert!(t.is_idempotent(&v.idempotent));
        }
    }

    #[test]
    fn matrix_algebra_is_not_basic() {
        let a = matrices(&Rationals);
        assert!(matches!(a.primitive_idempotents(), Err(AlgebraError::NotSplitBasic(_))));
    }

    #[test]
    fn opposite_and_enveloping() {
        let q = Rationals;
        let d = Arc::new(dual_numbers(&q));
        let op = d.opposite();
        assert!(op.is_opposite_of(&d));
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(op.basis_product(i, j), d.basis_product(i, j));
            }
        }
        let env = d.enveloping();
        assert_eq!(env.dim(), 4);
        env.check_associative().unwrap();
        let k = FiniteDimAlgebra::from_table(&q, vec!["1".into()], vec![vec![vec![q.one()]]], vec![q.one()]).unwrap();
        assert_eq!(k.enveloping().dim(), 1);
    }

    #[test]
    fn closure_of_full_basis_is_everything() {
        let f = PrimeField::new(1009).unwrap();
        let d = Arc::new(dual_numbers(&f));
        let gens = (0..2).map(|i| Generator { label: d.labels()[i].clone(), element: d.basis_vector(i) }).collect();
        let emb = d.subalgebra_closure(gens, false).unwrap();
        assert_eq!(emb.codimension(), 0);
        assert!(emb.check());
    }

    #[test]
    fn closure_missing_unit() {
        let f = PrimeField::new(1009).unwrap();
        let d = Arc::new(dual_numbers(&f));
        let gens = vec![Generator { label: "x".into(), element: d.basis_vector(1) }];
        assert_eq!(d.subalgebra_closure(gens.clone(), false).unwrap_err(), AlgebraError::NotUnital);
        let emb = d.subalgebra_closure(gens, true).unwrap();
        assert_eq!(emb.small.dim(), 2);
    }
}

//! Text format for quivers with relations and subalgebra generators.
//!
//! ```text
//! # comments start with '#'
//! field 1009                 # a prime, or Q
//! vertex 1 2 3               # one or more vertex names per line
//! arrow a: 1 -> 2            # arrow a from vertex 1 to vertex 2
//! relation b.a - 2*c         # a sum of paths; `b.a` means "a, then b"
//! cap 3                      # every path of this length lies in the ideal
//! composition = rightmost-first
//! generator 1                # a vertex or arrow of the quiver
//! generator x = b.a + 1/2*c  # a named combination of paths
//! subrelation x.a - y        # must vanish in the subalgebra
//! ```
//!
//! Names are declared before use. A bare vertex name in a word stands for
//! the trivial path at that vertex. A coefficient is an integer or a fraction
//! `p/q` followed by `*`. Words are written function-style (rightmost arrow
//! first) unless `composition = leftmost-first` is given.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{ParseError, ParseErrorKind};
use crate::field::FieldSpec;

pub const DEFAULT_PRIME: u64 = 1009;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Composition {
    RightmostFirst,
    LeftmostFirst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Self {
        Quiver { vertices, arrows }
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

/// One factor of a word: the trivial path at a vertex, or an arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Vertex(usize),
    Arrow(usize),
}

/// `coeff * w[0] * w[1] * ...`, stored function-style whatever the input
/// convention. `column` locates the term in its source line.
#[derive(Clone, Debug, PartialEq)]
pub struct Term<L> {
    pub coeff: BigRational,
    pub word: Vec<L>,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearExpr<L> {
    pub terms: Vec<Term<L>>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorDef {
    pub name: String,
    pub expr: LinearExpr<Letter>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    /// Field named in the file, if any.
    pub field: Option<FieldSpec>,
    pub quiver: Quiver,
    pub relations: Vec<LinearExpr<Letter>>,
    pub cap: usize,
    pub composition: Composition,
    pub generators: Vec<GeneratorDef>,
    /// Relations over generator indices expected to hold in the subalgebra.
    pub subrelations: Vec<LinearExpr<usize>>,
}

impl Presentation {
    pub fn field_or_default(&self) -> FieldSpec {
        self.field.unwrap_or(FieldSpec::PrimeField { characteristic: DEFAULT_PRIME })
    }

    pub fn is_monomial(&self) -> bool {
        self.relations.iter().all(|r| r.terms.len() == 1)
    }

    pub fn has_subalgebra(&self) -> bool {
        !self.generators.is_empty()
    }
}

/// Endpoints of a composable word: (source, target). `None` for a word made
/// of vertex letters only is impossible since words are nonempty.
pub fn word_endpoints(q: &Quiver, word: &[Letter]) -> Option<(usize, usize)> {
    let ends = |l: &Letter| match *l {
        Letter::Vertex(v) => (v, v),
        Letter::Arrow(a) => (q.arrows[a].source, q.arrows[a].target),
    };
    let (mut source, target) = ends(word.first()?);
    for l in &word[1..] {
        let (s, t) = ends(l);
        if t != source {
            return None;
        }
        source = s;
    }
    Some((source, target))
}

pub fn word_to_string(q: &Quiver, word: &[Letter]) -> String {
    word.iter()
        .map(|l| match *l {
            Letter::Vertex(v) => q.vertices[v].clone(),
            Letter::Arrow(a) => q.arrows[a].name.clone(),
        })
        .collect::<Vec<_>>()
        .join(".")
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, _src: src }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.line, self.column(), kind)
    }

    fn err_at(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.line, column, kind)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::Syntax(format!("expected `{c}`"))))
        }
    }

    fn expect_str(&mut self, s: &str) -> Result<(), ParseError> {
        self.skip_ws();
        let end = self.pos + s.chars().count();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(s.chars()) {
            self.pos = end;
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::Syntax(format!("expected `{s}`"))))
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && is_name_char(self.chars[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(ParseErrorKind::Syntax("expected a name".into())));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    /// `digits ['/' digits] '*'`, or nothing (leaving the cursor in place).
    fn coefficient(&mut self) -> Result<Option<BigRational>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(num) = self.digits() else { return Ok(None) };
        let mut den = String::from("1");
        let save = self.pos;
        if self.eat('/') {
            self.skip_ws();
            match self.digits() {
                Some(d) => den = d,
                None => {
                    self.pos = save;
                }
            }
        }
        if self.eat('*') {
            let num: BigInt = num.parse().expect("digits");
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return Err(self.err_at(start + 1, ParseErrorKind::BadCoefficient(format!("{num}/0"))));
            }
            return Ok(Some(BigRational::new(num, den)));
        }
        self.pos = start;
        Ok(None)
    }

    fn rest_is_empty(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::Syntax("unexpected trailing input".into())))
        }
    }

    /// `[+|-] term ((+|-) term)*` where each letter is resolved by `resolve`.
    fn expr<L>(
        &mut self,
        mut resolve: impl FnMut(&str) -> Option<L>,
    ) -> Result<Vec<Term<L>>, ParseError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let mut sign = BigRational::one();
            if self.eat('-') {
                sign = -sign;
            } else if !self.eat('+') && !first {
                break;
            }
            first = false;
            self.skip_ws();
            let column = self.column();
            let coeff = self.coefficient()?.unwrap_or_else(BigRational::one) * sign;
            let mut word = Vec::new();
            loop {
                self.skip_ws();
                let col = self.column();
                let name = self.name()?;
                let letter = resolve(&name).ok_or_else(|| self.err_at(col, ParseErrorKind::UnknownName(name)))?;
                word.push(letter);
                if !self.eat('.') {
                    break;
                }
            }
            terms.push(Term { coeff, word, column });
        }
        if terms.is_empty() {
            return Err(self.err(ParseErrorKind::Syntax("expected an expression".into())));
        }
        Ok(terms)
    }
}

/// Merge equal words and drop zero coefficients.
fn collect_terms<L: PartialEq + Clone>(terms: Vec<Term<L>>) -> Vec<Term<L>> {
    let mut out: Vec<Term<L>> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|o| o.word == t.word) {
            Some(o) => o.coeff += t.coeff,
            None => out.push(t),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut field = None;
    let mut quiver = Quiver::default();
    let mut names: HashMap<String, Letter> = HashMap::new();
    let mut relations = Vec::new();
    let mut cap = None;
    let mut composition = None;
    let mut generators: Vec<GeneratorDef> = Vec::new();
    let mut subrelations = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(content, line);
        if cur.at_end() {
            continue;
        }
        let kw_col = cur.column();
        let keyword = cur.name()?;
        match keyword.as_str() {
            "field" => {
                cur.skip_ws();
                let col = cur.column();
                let rest: String = cur.chars[cur.pos..].iter().collect();
                let spec = FieldSpec::parse(rest.trim()).map_err(|e| cur.err_at(col, e.into()))?;
                field = Some(spec);
            }
            "vertex" | "vertices" => {
                loop {
                    cur.skip_ws();
                    let col = cur.column();
                    let name = cur.name()?;
                    if names.contains_key(&name) {
                        return Err(cur.err_at(col, ParseErrorKind::DuplicateName(name)));
                    }
                    names.insert(name.clone(), Letter::Vertex(quiver.vertices.len()));
                    quiver.vertices.push(name);
                    if cur.at_end() {
                        break;
                    }
                }
            }
            "arrow" => {
                cur.skip_ws();
                let col = cur.column();
                let name = cur.name()?;
                if names.contains_key(&name) {
                    return Err(cur.err_at(col, ParseErrorKind::DuplicateName(name)));
                }
                cur.expect(':')?;
                let endpoint = |cur: &mut Cursor| -> Result<usize, ParseError> {
                    cur.skip_ws();
                    let col = cur.column();
                    let v = cur.name()?;
                    match names.get(&v) {
                        Some(Letter::Vertex(i)) => Ok(*i),
                        _ => Err(cur.err_at(col, ParseErrorKind::UnknownName(v))),
                    }
                };
                let source = endpoint(&mut cur)?;
                cur.expect_str("->")?;
                let target = endpoint(&mut cur)?;
                cur.rest_is_empty()?;
                names.insert(name.clone(), Letter::Arrow(quiver.arrows.len()));
                quiver.arrows.push(Arrow { name, source, target });
            }
            "relation" => {
                let terms = cur.expr(|n| names.get(n).copied())?;
                cur.rest_is_empty()?;
                relations.push(LinearExpr { terms, line });
            }
            "cap" => {
                cur.skip_ws();
                let col = cur.column();
                let n: usize = cur
                    .digits()
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| cur.err_at(col, ParseErrorKind::Syntax("expected a positive integer".into())))?;
                if n < 2 {
                    return Err(cur.err_at(col, ParseErrorKind::Invalid(format!("cap must be at least 2, got {n}"))));
                }
                cur.rest_is_empty()?;
                cap = Some(n);
            }
            "composition" => {
                cur.eat('=');
                cur.skip_ws();
                let col = cur.column();
                let rest: String = cur.chars[cur.pos..].iter().collect();
                composition = Some(match rest.trim() {
                    "rightmost-first" => Composition::RightmostFirst,
                    "leftmost-first" => Composition::LeftmostFirst,
                    other => {
                        return Err(cur.err_at(
                            col,
                            ParseErrorKind::Invalid(format!(
                                "composition must be rightmost-first or leftmost-first, got `{other}`"
                            )),
                        ))
                    }
                });
            }
            "generator" => {
                cur.skip_ws();
                let col = cur.column();
                let name = cur.name()?;
                if generators.iter().any(|g| g.name == name) {
                    return Err(cur.err_at(col, ParseErrorKind::DuplicateName(name)));
                }
                let expr = if cur.eat('=') {
                    let terms = cur.expr(|n| names.get(n).copied())?;
                    cur.rest_is_empty()?;
                    LinearExpr { terms, line }
                } else {
                    cur.rest_is_empty()?;
                    let letter = *names
                        .get(&name)
                        .ok_or_else(|| cur.err_at(col, ParseErrorKind::UnknownName(name.clone())))?;
                    LinearExpr { terms: vec![Term { coeff: BigRational::one(), word: vec![letter], column: col }], line }
                };
                generators.push(GeneratorDef { name, expr });
            }
            "subrelation" => {
                let terms = cur.expr(|n| generators.iter().position(|g| g.name == n))?;
                cur.rest_is_empty()?;
                subrelations.push(LinearExpr { terms, line });
            }
            other => {
                return Err(ParseError::new(line, kw_col, ParseErrorKind::Syntax(format!("unknown keyword `{other}`"))));
            }
        }
    }

    if quiver.vertices.is_empty() {
        return Err(ParseError::new(last_line.max(1), 1, ParseErrorKind::Missing("vertex")));
    }
    let cap = cap.ok_or_else(|| ParseError::new(last_line.max(1), 1, ParseErrorKind::Missing("cap")))?;
    let composition = composition.unwrap_or(Composition::RightmostFirst);
    if composition == Composition::LeftmostFirst {
        for r in &mut relations {
            r.terms.iter_mut().for_each(|t| t.word.reverse());
        }
        for g in &mut generators {
            g.expr.terms.iter_mut().for_each(|t| t.word.reverse());
        }
        for r in &mut subrelations {
            r.terms.iter_mut().for_each(|t: &mut Term<usize>| t.word.reverse());
        }
    }

    // Words must compose; relation terms must be parallel nontrivial paths.
    let check_words = |expr: &LinearExpr<Letter>| -> Result<Vec<(usize, usize)>, ParseError> {
        expr.terms
            .iter()
            .map(|t| {
                word_endpoints(&quiver, &t.word).ok_or_else(|| {
                    ParseError::new(expr.line, t.column, ParseErrorKind::NonComposable(word_to_string(&quiver, &t.word)))
                })
            })
            .collect()
    };
    for r in &mut relations {
        let ends = check_words(r)?;
        for (t, e) in r.terms.iter().zip(&ends) {
            if t.word.iter().all(|l| matches!(l, Letter::Vertex(_))) {
                return Err(ParseError::new(
                    r.line,
                    t.column,
                    ParseErrorKind::Invalid("relations may not contain trivial paths".into()),
                ));
            }
            if *e != ends[0] {
                return Err(ParseError::new(
                    r.line,
                    t.column,
                    ParseErrorKind::NonParallel(format!(
                        "`{}` runs {} -> {} but `{}` runs {} -> {}",
                        word_to_string(&quiver, &t.word),
                        quiver.vertices[e.0],
                        quiver.vertices[e.1],
                        word_to_string(&quiver, &r.terms[0].word),
                        quiver.vertices[ends[0].0],
                        quiver.vertices[ends[0].1],
                    )),
                ));
            }
        }
        r.terms = collect_terms(std::mem::take(&mut r.terms));
        if r.terms.is_empty() {
            return Err(ParseError::new(r.line, 1, ParseErrorKind::Invalid("relation is identically zero".into())));
        }
    }
    for g in &mut generators {
        check_words(&g.expr)?;
        g.expr.terms = collect_terms(std::mem::take(&mut g.expr.terms));
    }
    for r in &mut subrelations {
        r.terms = collect_terms(std::mem::take(&mut r.terms));
    }

    // Coefficients must make sense in the file's field.
    let spec = field.unwrap_or(FieldSpec::PrimeField { characteristic: DEFAULT_PRIME });
    if let FieldSpec::PrimeField { characteristic } = spec {
        let p = BigInt::from(characteristic);
        let check = |line: usize, t_col: usize, c: &BigRational| -> Result<(), ParseError> {
            if (c.denom() % &p).is_zero() {
                Err(ParseError::new(line, t_col, ParseErrorKind::BadCoefficient(c.to_string())))
            } else {
                Ok(())
            }
        };
        for r in &relations {
            r.terms.iter().try_for_each(|t| check(r.line, t.column, &t.coeff))?;
        }
        for g in &generators {
            g.expr.terms.iter().try_for_each(|t| check(g.expr.line, t.column, &t.coeff))?;
        }
        for r in &subrelations {
            r.terms.iter().try_for_each(|t| check(r.line, t.column, &t.coeff))?;
        }
    }

    Ok(Presentation { field, quiver, relations, cap, composition, generators, subrelations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_is_the_ground_field() {
        let p = parse_presentation("vertex v\ncap 2\n").unwrap();
        assert_eq!(p.quiver.vertices, vec!["v"]);
        assert!(p.quiver.arrows.is_empty());
        assert!(p.relations.is_empty());
    }

    #[test]
    fn dual_numbers() {
        let p = parse_presentation("field Q\nvertex v\narrow x: v -> v\nrelation x.x\ncap 2\n").unwrap();
        assert_eq!(p.field, Some(FieldSpec::Rationals));
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0].terms[0].word, vec![Letter::Arrow(0), Letter::Arrow(0)]);
        assert!(p.is_monomial());
    }

    #[test]
    fn coefficients_and_signs() {
        let text = "vertex 1 2\narrow a: 1 -> 2\narrow b: 1 -> 2\nrelation -a + 3/2*b - 2*a\ncap 2";
        let p = parse_presentation(text).unwrap();
        let terms = &p.relations[0].terms;
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].coeff, BigRational::from_integer((-3).into()));
        assert_eq!(terms[1].coeff, BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn numeric_vertex_names_are_not_coefficients() {
        let text = "vertex 1 2\narrow a: 1 -> 2\ncap 2\ngenerator g = 2 + 2*1 + a.1";
        let p = parse_presentation(text).unwrap();
        let t = &p.generators[0].expr.terms;
        assert_eq!(t[0].word, vec![Letter::Vertex(1)]);
        assert_eq!(t[1].word, vec![Letter::Vertex(0)]);
        assert_eq!(t[1].coeff, BigRational::from_integer(2.into()));
    }

    #[test]
    fn non_parallel_relation_is_located() {
        let text = "vertex 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation a.b + b.a\ncap 3";
        let err = parse_presentation(text).unwrap_err();
        assert_eq!(err.line, 4);
        assert_eq!(err.column, 16);
        assert!(matches!(err.kind, ParseErrorKind::NonParallel(_)));
    }

    #[test]
    fn non_composable_and_unknown_names() {
        let err = parse_presentation("vertex 1 2\narrow a: 1 -> 2\nrelation a.a\ncap 2").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::NonComposable(_)));
        let err = parse_presentation("vertex 1\nrelation z\ncap 2").unwrap_err();
        assert_eq!((err.line, err.column), (2, 10));
        assert_eq!(err.kind, ParseErrorKind::UnknownName("z".into()));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse_presentation("vertex 1\nbogus\ncap 2").unwrap_err().kind,
            ParseErrorKind::Syntax(_)
        ));
        assert_eq!(parse_presentation("vertex 1").unwrap_err().kind, ParseErrorKind::Missing("cap"));
        assert!(parse_presentation("vertex 1\ncap 1").is_err());
        assert!(parse_presentation("vertex 1 1\ncap 2").is_err());
        assert!(matches!(
            parse_presentation("field 4\nvertex 1\ncap 2").unwrap_err().kind,
            ParseErrorKind::Field(_)
        ));
        assert!(matches!(
            parse_presentation("field 5\nvertex 1\narrow x: 1 -> 1\nrelation 1/5*x.x\ncap 2").unwrap_err().kind,
            ParseErrorKind::BadCoefficient(_)
        ));
    }

    #[test]
    fn leftmost_first_reverses_words() {
        let text = "vertex 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\ncomposition = leftmost-first\nrelation a.b\ncap 2";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.relations[0].terms[0].word, vec![Letter::Arrow(1), Letter::Arrow(0)]);
    }

    #[test]
    fn generators_and_subrelations() {
        let text = "vertex 1 2\narrow a: 1 -> 2\ncap 2\ngenerator 1\ngenerator 2\ngenerator x = a\nsubrelation x.1 - x";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.generators.len(), 3);
        assert_eq!(p.subrelations[0].terms[0].word, vec![2, 0]);
    }
}

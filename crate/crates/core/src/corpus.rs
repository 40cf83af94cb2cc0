//! Built-in presentations and loading helpers.

use crate::error::{AlgebraError, LoadError};
use crate::field::Field;
use crate::module::ExtensionRings;
use crate::presentation::{parse_presentation, Presentation};
use crate::quiver::BoundQuiverAlgebra;

/// `(name, text)` for every embedded presentation.
pub const BUILTINS: &[(&str, &str)] = &[
    ("ex1", include_str!("../presentations/ex1.pres")),
    ("ex2", include_str!("../presentations/ex2.pres")),
    ("kx2", include_str!("../presentations/kx2.pres")),
    ("a2", include_str!("../presentations/a2.pres")),
    ("a3", include_str!("../presentations/a3.pres")),
    ("cyc2", include_str!("../presentations/cyc2.pres")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// A bound quiver algebra together with the extension its generators define.
pub struct LoadedExtension<F: Field> {
    pub presentation: Presentation,
    pub algebra: BoundQuiverAlgebra<F>,
    pub rings: ExtensionRings<F>,
}

pub fn load_algebra<F: Field>(field: &F, text: &str) -> Result<(Presentation, BoundQuiverAlgebra<F>), LoadError> {
    let pres = parse_presentation(text)?;
    let alg = BoundQuiverAlgebra::build(field, &pres)?;
    Ok((pres, alg))
}

pub fn load_extension<F: Field>(field: &F, text: &str, adjoin_unit: bool) -> Result<LoadedExtension<F>, LoadError> {
    let (presentation, algebra) = load_algebra(field, text)?;
    if !presentation.has_subalgebra() {
        return Err(AlgebraError::Invalid("presentation declares no subalgebra generators".into()).into());
    }
    let rings = ExtensionRings::new(algebra.subalgebra(&presentation, adjoin_unit)?);
    Ok(LoadedExtension { presentation, algebra, rings })
}

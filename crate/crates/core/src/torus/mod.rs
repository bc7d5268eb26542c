//! The Frobenius torus: character lattice, multiplicative relations among
//! eigenvalues, regularity and sufficient criteria for it.

mod character;
mod criteria;
mod regularity;
mod relation;

pub use character::{character_lattice, pairing_rows, CharacterLattice};
pub use criteria::{
    criterion_half_slope, criterion_height_one, criterion_ordinary_galois, Certificate, Criterion, CriterionStatus,
};
pub use regularity::{
    decide, gather_evidence, lattice_obstruction, regularity, RegularityError, RegularityEvidence, RegularityReason,
    RegularityVerdict, VerdictFlag, GALOIS_SAMPLE,
};
pub use relation::{relation_lattice, saturate, Relation, RelationConfig, RelationLattice, RootOfUnity};

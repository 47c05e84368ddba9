//! The affine algebra of sl2: modes and their brackets, vacuum and twisted
//! vacuum modules in a PBW basis, Segal-Sugawara operators, spectral flow and
//! the adjoint action of loop-group elements, with exact checks of how the
//! Sugawara operators transform under conjugation.

mod conjugation;
mod lie;
mod minuscule;
mod module;
mod sugawara;

pub use conjugation::{
    ad_loop, check_conjugation_coweight, check_conjugation_nilpotent, matrix_to_modes,
    spectral_flow, spectral_flow_letter, verify_conjugation_coweight,
    verify_conjugation_nilpotent, AdjointData, ConjugationCheck,
};
pub use lie::{
    affine_table, bracket_letters, bracket_modes, level, Letter, LieData, ModeElement, E, F, H,
};
pub use minuscule::{verify_minuscule_presentation, GradedDimension, MinusculeReport};
pub use module::{
    apply_letter, apply_mode, apply_single, creation_words, pbw_basis, word_degree, word_weight, Action,
    ModuleState, Vacuum, Word,
};
pub use sugawara::{
    central_charge, depth, sugawara_apply, sugawara_apply_at, sugawara_prefactor,
    transformed_sugawara, truncation_bound, SugawaraCache,
};

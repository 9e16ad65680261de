//! Two presentations of categories with equality on objects, E-categories
//! without it, functors between them, and the translations between the
//! essentially algebraic and hom-family presentations.

mod ea;
mod ecat;
mod functor;
mod hf;
mod translate;

pub use ea::{check_ea, ComposableIndex, EaCategory};
pub use ecat::{check_e, CompTable, ECategory};
pub use functor::{check_e_functor, check_ea_functor, check_hf_functor, EFunctor, EaFunctor, HfFunctor};
pub(crate) use functor::induced_f2;
pub use hf::{check_hf, check_identity_transport_lemmas, discrete_category, HfCategory};
pub use translate::{
    check_hf_iso, check_hom_identities, ea_roundtrip, ea_to_hf, hf_roundtrip, hf_to_ea, roundtrip_checks, search_ea_iso, verify_ea_iso,
    EaIso, EaToHf, HfToEa,
};

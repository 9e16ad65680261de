//! The function category `C(I,F)`, the relation category `S(I,F)`, the
//! functors between them, and the full image of an E-functor.

mod image;
mod iso;
mod relcat;
mod funcat;

pub use funcat::{build_c, CCategory};
pub use image::{
    check_example_iso, check_full_image, family_as_efunctor, full_image, setoids_category, FamilyFunctor, FullImage,
    SetoidsCategory,
};
pub use iso::{check_graph_laws, check_iso, functor_m, functor_n, unique_choice, IsoCheck};
pub use relcat::{build_s, check_s_arrow, SCategory};

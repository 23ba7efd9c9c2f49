//! Exact computation of Möbius cohomology for poset modules.
//!
//! The crate builds up from finite posets and exact linear algebra to
//! vector-space valued poset modules, their cochain complexes, and the
//! decategorification identities connecting cohomology to Möbius inversion:
//! Euler characteristics recover the inversion of the dimension function,
//! and Galois connections satisfy Rota's identity in its classical,
//! inversion, and Ext forms. Everything is computed over the rationals or a
//! prime field, so every check is an exact integer identity.

pub mod cohomology;
pub mod galois;
pub mod incidence;
pub mod io;
pub mod linalg;
pub mod module;
pub mod poset;
pub mod report;
pub mod rng;

pub use cohomology::{
    check_resolution_exact, euler_characteristic, euler_check, hom_complex, mobius_cohomology,
    mobius_homology, standard_resolution, CochainComplex, CohomologyResult, Resolution,
};
pub use galois::{
    adjunction_dim_check, check_functor_equalities, enumerate_connections, poset_catalog,
    rota_classical_check, rota_ext_check, rota_inversion_check, verify_connection,
    GaloisConnection, GaloisError,
};
pub use incidence::{
    identity_one, mobius_hall, mobius_recursive, zeta, GrFunction, IncidenceFunction,
};
pub use linalg::{cohomology_dim, FieldSpec, LinalgError, Matrix, Scalar};
pub use module::{
    nat_space, pullback, pushforward, pushforward_open, ModuleError, ModuleMap, NatSpace,
    PosetModule,
};
pub use poset::{Chain, ElemId, ElemSet, MonotoneMap, Poset, PosetError};
pub use report::{CheckItem, CheckReport};
pub use rng::SplitMix64;

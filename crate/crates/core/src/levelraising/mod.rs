//! Old and new forms at an auxiliary prime ℓ, and the level-raising
//! experiments built on them.

pub mod eisenstein;
pub mod oldnew;
pub mod raise;
pub mod witness;

pub use oldnew::{build_oldnew, compose_block, expected_block, OldNewData};
pub use raise::{hida_slice_scan, raise_hypothesis, RaiseData, ScanConfig, ScanReport, Valuation};
pub use witness::{ell_new_subspace, witness_search, CongruenceReport};
pub use eisenstein::{very_eisenstein_flag, EisensteinConfig, EisensteinFlag, ModSystem, Verdict};

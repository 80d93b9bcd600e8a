//! Definite quaternion algebras over Q: orders, ideal classes, units and
//! local splittings.

pub mod algebra;
pub mod lattice;
pub mod order;

pub use algebra::{build_algebra, QuatAlgebra, QuatElt};
pub use lattice::Lattice;
pub mod classes;
pub mod ideals;

pub use classes::{left_ideal_classes, mass, ClassSet};
pub use order::{eichler_order, local_splitting, maximal_order, LocalSplitting, Order};

//! Leavitt path algebras of finite graphs: graphs and their moves, exact
//! K-theory invariants, arithmetic in relative Cohn path algebras, and the
//! classification invariants built on them.

pub mod algebra;
pub mod classify;
pub mod graph;
pub mod linalg;
pub mod moves;
pub mod report;
pub mod verify;

pub use algebra::{parse_expression, CohnAlgebra, Element};
pub use classify::{compare, invariants, ClassificationVerdict, GraphInvariants, VerdictTag};
pub use graph::{builtin, parse_graph, render_graph, Graph, GraphError};
pub use linalg::{k0_presentation, PointedAbelianGroup};
pub use moves::{Move, MoveError, MoveReport};
pub use report::{Check, CheckStatus};

//! HOMFLY polynomials of link diagrams by skein resolution, signed Seifert
//! graph analysis, and checkers for the lower `v`-degree bounds of
//! homogeneous links.

pub mod bounds;
pub mod corpus;
pub mod diagram;
pub mod homfly;
pub mod par;
pub mod poly;
pub mod seifert;
pub mod skein_tree;
pub mod verify;

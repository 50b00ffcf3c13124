//! Exact combinatorics for sum-product and expander-polynomial estimates
//! over prime fields.
//!
//! Everything here is computed exactly: sumsets and polynomial images,
//! representation functions and additive energies, dyadic level sets, the
//! normalized fourth energy `d₄⁺`, three-variable energies, and point-plane
//! incidences. [`inequality`] turns those counts into structured reports
//! comparing both sides of the classical growth inequalities.

pub mod error;
pub mod families;
pub mod fieldset;
pub mod fit;
pub mod incidence;
pub mod inequality;
pub mod quadpoly;
pub mod rational;
pub mod setstats;
pub mod verify;

pub use error::{Error, Result};
pub use families::{generate, FamilySpec};
pub use fieldset::{make_field, parse_set, FpSet, PrimeField};
pub use fit::{fit_power_law, ExponentFit};
pub use incidence::{incidences, vinh_check, Plane, PlaneSet, PointSet3};
pub use inequality::{Holds, IneqReport, Quantity};
pub use quadpoly::{DegeneracyVerdict, Form3Verdict, LinearForm2, QuadPoly2, QuadPoly3, UniQuad};
pub use rational::Rational;
pub use setstats::{
    count_solutions, d4_exact, d4_search, dyadic_profile, energy2, energy3, energy4, image2, level_set, product_set,
    rep_function, sumset, D4Mode, D4Result, D4Strategy, DyadicProfile, DyadicRow, Energy3Result, RepProfile,
};

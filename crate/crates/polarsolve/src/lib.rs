//! Exact real-point solver for smooth compact complete intersections.
//!
//! Given polynomials `f1, …, fp` over the rationals cutting out a smooth,
//! compact real variety of codimension `p` in `n`-space, this crate finds at
//! least one representative point in every connected component of the real
//! zero set. It does so entirely in exact rational arithmetic: chart systems
//! built from Jacobian minors reduce the problem to zero-dimensional ideals,
//! each chart is solved into a univariate representation `(q, p1…pn)`, the
//! charts are merged, and the real roots of `q` are isolated by Sturm
//! sequences and labelled by Thom sign codes.
//!
//! The crate is organized along the stages of that computation:
//!
//! * [`ratpoly`] — exact rationals, multivariate/univariate polynomials,
//!   polynomial linear algebra, and the text grammar for input systems.
//! * [`circuit`] — division-free arithmetic circuits (an alternative input
//!   form), with evaluation, expansion, reverse-mode differentiation and
//!   size/depth metrics.
//! * [`polar`] — Jacobians, minor selections, the exchange identity, generic
//!   triangular coordinate changes, and per-chart critical-point systems.
//! * [`zerodim`] — Buchberger bases, quotient-ring linear algebra, univariate
//!   representations and their chart-by-chart combination.
//! * [`realroots`] — Sturm chains, root isolation, Thom encoding, interval
//!   refinement and exact coordinate boxes.
//! * [`pipeline`] — orchestration, hypothesis checks, retries, reporting and
//!   the CLI entry points.

pub mod circuit;
pub mod pipeline;
pub mod polar;
pub mod ratpoly;
pub mod realroots;
pub mod scalar;
pub mod zerodim;

pub use scalar::Scalar;

/// Arbitrary-precision rational scalar used by the shipped tooling.
pub type Rat = num_rational::BigRational;

/// Multivariate polynomial over [`Rat`].
pub type Poly = ratpoly::MultiPoly<Rat>;

/// Univariate polynomial over [`Rat`].
pub type UPoly = ratpoly::UniPoly<Rat>;

/// Dense matrix over [`Rat`].
pub type Mat = ratpoly::Matrix<Rat>;

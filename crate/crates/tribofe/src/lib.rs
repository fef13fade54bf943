//! 2D nonlinear finite-element contact mechanics with a coarse-grained
//! Lennard-Jones adhesion law and two friction laws: a distance-independent
//! sliding threshold and a local extended-Amontons law. Includes the
//! closed-form JKR companion model, least-squares fitting of the global
//! extended-Amontons relation, scenario configuration, and CSV/SVG emission.

pub mod analytics;
pub mod capmesh;
pub mod config;
pub mod contact;
pub mod fem;
pub mod kinematics;
pub mod material;
pub mod mesh;
pub mod scenario;
pub mod svg;
pub mod traction;

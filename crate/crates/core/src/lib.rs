//! Formal group laws of K3 surfaces.

pub mod algebra;
pub mod series;
pub mod fgl;
pub mod stienstra;
pub mod elliptic;
pub mod artin;
pub mod landweber;

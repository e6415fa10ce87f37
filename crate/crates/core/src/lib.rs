pub mod algebra;
pub mod artin;
pub mod bundle;
pub mod group_zeta;
pub mod pure_zeta;
pub mod zero_dist;

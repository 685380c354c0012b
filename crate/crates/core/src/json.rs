//! Serialization helpers: rationals as `"num/den"` strings (integers print
//! without a denominator), polynomials in their canonical text form.

use serde::Serializer;

use crate::poly::{Coefficient, HomogeneousPoly};

pub fn rational<S: Serializer>(c: &Coefficient, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(c)
}

pub fn opt_rational<S: Serializer>(c: &Option<Coefficient>, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Some(c) => s.collect_str(c),
        None => s.serialize_none(),
    }
}

pub fn poly<S: Serializer>(p: &HomogeneousPoly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

pub fn polys<S: Serializer>(ps: &[HomogeneousPoly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(|p| p.to_string()))
}

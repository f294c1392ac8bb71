//! Arf invariants of Rokhlin forms from signature data, plane-curve genus
//! arithmetic, and the knotted-surface catalog feeding the membership tests.

use serde::Serialize;

use crate::{Error, Result};

/// Signature data of a knotted characteristic surface.
#[derive(Debug, Clone, Serialize)]
pub struct KnottedSurfaceData {
    pub name: String,
    /// Signature of the ambient 4-manifold.
    pub sigma: i64,
    /// Self-intersection F.F of the surface.
    pub self_intersection: i64,
    /// Genus of the surface.
    pub genus: i64,
    /// Arf invariant of the Rokhlin form, when the surface is
    /// characteristic (8 divides sigma - F.F).
    pub arf: Option<u8>,
}

/// Arf(q_F) = (sigma(M) - F.F)/8 mod 2, defined when 8 | sigma - F.F.
pub fn arf_from_signature(sigma: i64, self_intersection: i64) -> Result<u8> {
    let d = sigma - self_intersection;
    if d % 8 != 0 {
        return Err(Error::NotCharacteristic(sigma, self_intersection));
    }
    Ok((d / 8).rem_euclid(2) as u8)
}

/// Genus of a nonsingular plane curve of degree d: (d-1)(d-2)/2.
pub fn plane_curve_genus(d: i64) -> Result<i64> {
    if d < 1 {
        return Err(Error::GenusOutOfRange(0, "degree must be at least 1"));
    }
    Ok((d - 1) * (d - 2) / 2)
}

/// Catalog entries: `cp2-Kd(d)` is the degree-d plane curve in CP^2 and
/// `cp2-K3-sum(g)` the connected sum of the cubic with the trivial genus
/// g-1 surface.
pub fn surface_catalog(name: &str) -> Result<KnottedSurfaceData> {
    if let Some(arg) = parse_call(name, "cp2-Kd") {
        let d: i64 = arg.parse().map_err(|_| Error::UnknownCurve(name.into()))?;
        let genus = plane_curve_genus(d)?;
        let self_intersection = d * d;
        let arf = arf_from_signature(1, self_intersection).ok();
        return Ok(KnottedSurfaceData {
            name: name.to_string(),
            sigma: 1,
            self_intersection,
            genus,
            arf,
        });
    }
    if let Some(arg) = parse_call(name, "cp2-K3-sum") {
        let g: i64 = arg.parse().map_err(|_| Error::UnknownCurve(name.into()))?;
        if g < 1 {
            return Err(Error::GenusOutOfRange(
                0,
                "connected-sum genus must be at least 1",
            ));
        }
        return Ok(KnottedSurfaceData {
            name: name.to_string(),
            sigma: 1,
            self_intersection: 9,
            genus: g,
            arf: Some(arf_from_signature(1, 9)?),
        });
    }
    Err(Error::UnknownCurve(name.to_string()))
}

fn parse_call<'a>(name: &'a str, callee: &str) -> Option<&'a str> {
    name.strip_prefix(callee)?
        .strip_prefix('(')?
        .strip_suffix(')')
}

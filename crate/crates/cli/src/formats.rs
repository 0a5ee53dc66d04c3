//! JSON input documents. Every document may carry `"format": 1`.

use std::collections::BTreeMap;
use std::path::Path;

use lattice_cft_core::lattice::{catalog, discriminant_group};
use lattice_cft_core::surface::{Boundary, Component};
use lattice_cft_core::{
    BlockLabel, DiscriminantGroup, EvenLattice, GroupElement, IntMatrix, Orientation, Rational, Surface,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const FORMAT: u32 = 1;

/// Reads `arg` as inline JSON when it starts with `[` or `{`, otherwise as a file.
pub fn load_json(arg: &str) -> Result<Value, CliError> {
    let t = arg.trim_start();
    let text = if t.starts_with('[') || t.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::new(crate::error::ErrorKind::Io, format!("{arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn check_format(v: &Value) -> Result<(), CliError> {
    match v.get("format") {
        None => Ok(()),
        Some(f) if f.as_u64() == Some(FORMAT as u64) => Ok(()),
        Some(f) => Err(CliError::parse(format!("unsupported format {f}"))),
    }
}

/// A bundled name (`A2`, `E8`, `Z(4)`, …), a Gram matrix, or `{"gram": …}`.
pub fn lattice_document(arg: &str) -> Result<Value, CliError> {
    if let Some((name, _)) = catalog::bundled().into_iter().find(|(n, _)| *n == arg) {
        return Ok(serde_json::json!({ "name": name }));
    }
    load_json(arg)
}

pub fn parse_lattice(doc: &Value) -> Result<EvenLattice, CliError> {
    check_format(doc)?;
    if let Some(name) = doc.get("name").and_then(Value::as_str) {
        return catalog::bundled()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, l)| l)
            .ok_or_else(|| CliError::invalid(format!("unknown lattice {name}")));
    }
    let gram = doc.get("gram").unwrap_or(doc);
    let rows: Vec<Vec<i64>> = serde_json::from_value(gram.clone())?;
    let m = IntMatrix::from_rows(&rows).ok_or_else(|| CliError::parse("gram rows have different lengths"))?;
    Ok(EvenLattice::new(m)?)
}

pub fn load_lattice(arg: &str) -> Result<(Value, EvenLattice, DiscriminantGroup), CliError> {
    let doc = lattice_document(arg)?;
    let lat = parse_lattice(&doc)?;
    let disc = discriminant_group(&lat);
    Ok((doc, lat, disc))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryDoc {
    pub id: String,
    pub orientation: OrientationDoc,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OrientationDoc {
    In,
    Out,
}

impl From<OrientationDoc> for Orientation {
    fn from(o: OrientationDoc) -> Self {
        match o {
            OrientationDoc::In => Orientation::In,
            OrientationDoc::Out => Orientation::Out,
        }
    }
}

impl From<Orientation> for OrientationDoc {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::In => OrientationDoc::In,
            Orientation::Out => OrientationDoc::Out,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub genus: u32,
    #[serde(default)]
    pub boundaries: Vec<BoundaryDoc>,
}

/// `{"components": [...], "labels": {...}}` or a single component
/// `{"genus": g, "boundaries": [...], "labels": {...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundaries: Option<Vec<BoundaryDoc>>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<i64>>,
}

impl SurfaceDoc {
    pub fn from_surface(s: &Surface, labels: &BlockLabel) -> Self {
        SurfaceDoc {
            format: Some(FORMAT),
            components: Some(
                s.components()
                    .iter()
                    .map(|c| ComponentDoc {
                        genus: c.genus,
                        boundaries: c
                            .boundaries
                            .iter()
                            .map(|b| BoundaryDoc { id: b.id.clone(), orientation: b.orientation.into() })
                            .collect(),
                    })
                    .collect(),
            ),
            genus: None,
            boundaries: None,
            labels: labels.iter().map(|(k, v)| (k.clone(), v.coords.clone())).collect(),
        }
    }

    pub fn surface(&self) -> Result<Surface, CliError> {
        let comps = match (&self.components, self.genus) {
            (Some(c), None) if self.boundaries.is_none() => c.clone(),
            (None, Some(g)) => vec![ComponentDoc { genus: g, boundaries: self.boundaries.clone().unwrap_or_default() }],
            _ => return Err(CliError::parse("surface needs either \"components\" or \"genus\"")),
        };
        let comps = comps
            .into_iter()
            .map(|c| Component {
                genus: c.genus,
                boundaries: c
                    .boundaries
                    .into_iter()
                    .map(|b| Boundary { id: b.id, orientation: b.orientation.into() })
                    .collect(),
            })
            .collect();
        Ok(Surface::new(comps)?)
    }

    /// Labels from the document; unlabeled circles default to `0`.
    pub fn labels(&self, s: &Surface, disc: &DiscriminantGroup) -> Result<BlockLabel, CliError> {
        let mut out = BlockLabel::zeros(s, disc);
        for (id, coords) in &self.labels {
            if s.boundary(id).is_none() {
                return Err(CliError::invalid(format!("label for unknown circle {id}")));
            }
            out.insert(id, element(disc, coords)?);
        }
        Ok(out)
    }
}

pub fn parse_surface(doc: &Value) -> Result<SurfaceDoc, CliError> {
    check_format(doc)?;
    Ok(serde_json::from_value(doc.clone())?)
}

pub fn element(disc: &DiscriminantGroup, coords: &[i64]) -> Result<GroupElement, CliError> {
    let e = GroupElement::new(coords.to_vec());
    if !disc.contains(&e) {
        return Err(CliError::invalid(format!(
            "{coords:?} is not reduced for invariant factors {:?}",
            disc.invariant_factors()
        )));
    }
    Ok(e)
}

/// Comma-separated integers, e.g. `1` or `0,2`.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<i64>().map_err(|e| CliError::parse(format!("{t:?}: {e}"))))
        .collect()
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let s = s.trim();
    let bad = |e: std::num::ParseIntError| CliError::parse(format!("{s:?}: {e}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().map_err(bad)?;
            if d == 0 {
                return Err(CliError::parse("zero denominator"));
            }
            Ok(Rational::new(n.trim().parse().map_err(bad)?, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(bad)?)),
    }
}

/// `a,b` with each side a `:`-separated rational vector, e.g. `1/2,1/2` or `1/2:0,0:1/2`.
pub fn parse_characteristic(s: &str) -> Result<(Vec<Rational>, Vec<Rational>), CliError> {
    let (a, b) = s.split_once(',').ok_or_else(|| CliError::parse("characteristic must be a,b"))?;
    let vec = |t: &str| t.split(':').map(parse_rational).collect::<Result<Vec<_>, _>>();
    Ok((vec(a)?, vec(b)?))
}

fn complex(v: &Value) -> Result<Complex64, CliError> {
    match v {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(p) if p.len() == 2 => {
            let f = |x: &Value| x.as_f64().ok_or_else(|| CliError::parse("complex parts must be numbers"));
            Ok(Complex64::new(f(&p[0])?, f(&p[1])?))
        }
        Value::Object(o) => {
            let f = |k: &str| o.get(k).and_then(Value::as_f64).unwrap_or(0.0);
            Ok(Complex64::new(f("re"), f("im")))
        }
        _ => Err(CliError::parse(format!("not a complex number: {v}"))),
    }
}

/// Complex entries are numbers, `[re, im]` pairs or `{"re", "im"}` objects.
pub fn parse_complex_vector(v: &Value) -> Result<Vec<Complex64>, CliError> {
    let v = v.get("z").unwrap_or(v);
    match v {
        Value::Array(xs) => xs.iter().map(complex).collect(),
        other => Ok(vec![complex(other)?]),
    }
}

/// An array of rows of complex entries, or a single complex entry for `g = 1`.
pub fn parse_complex_matrix(v: &Value) -> Result<Vec<Vec<Complex64>>, CliError> {
    let v = v.get("tau").unwrap_or(v);
    match v {
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_array) => rows
            .iter()
            .map(|r| r.as_array().unwrap().iter().map(complex).collect())
            .collect(),
        other => Ok(vec![vec![complex(other)?]]),
    }
}

pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn characteristics() {
        let (a, b) = parse_characteristic("1/2:0,0:-1/3").unwrap();
        assert_eq!(a, [Rational::new(1, 2), Rational::from_integer(0)]);
        assert_eq!(b, [Rational::from_integer(0), Rational::new(-1, 3)]);
        assert!(parse_characteristic("1/2").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn complex_inputs() {
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(parse_complex_matrix(&json!([0, 1])).unwrap(), [vec![i]]);
        assert_eq!(parse_complex_matrix(&json!([[[0, 1]]])).unwrap(), [vec![i]]);
        assert_eq!(parse_complex_matrix(&json!({"tau": [[{"im": 1}]]})).unwrap(), [vec![i]]);
        assert_eq!(parse_complex_vector(&json!([0.5, [0, 1]])).unwrap(), [Complex64::new(0.5, 0.0), i]);
    }

    #[test]
    fn surface_round_trip() {
        let doc = json!({"genus": 1, "boundaries": [{"id": "x", "orientation": "out"}], "labels": {"x": [1]}});
        let sd = parse_surface(&doc).unwrap();
        let s = sd.surface().unwrap();
        let disc = discriminant_group(&catalog::a(1));
        let labels = sd.labels(&s, &disc).unwrap();
        let back = SurfaceDoc::from_surface(&s, &labels);
        let again = back.surface().unwrap();
        assert_eq!(again.shape(), s.shape());
        assert_eq!(back.labels.get("x"), Some(&vec![1]));
        assert!(parse_surface(&json!({"format": 2, "genus": 0})).is_err());
    }

    #[test]
    fn lattices_by_name_and_gram() {
        let (_, l, d) = load_lattice("A2").unwrap();
        assert_eq!((l.rank(), d.order()), (2, 3));
        let (_, l, _) = load_lattice(r#"{"gram": [[2, 1], [1, 2]]}"#).unwrap();
        assert_eq!(l.det(), 3);
        assert!(load_lattice("[[2, 1], [1, 3]]").is_err());
    }
}

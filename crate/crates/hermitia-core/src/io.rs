//! JSON encoding of the CLI data types: matrices, domain points, triples,
//! surface group representations, and Lie algebra homomorphisms.
//!
//! Every parser fully validates its input (shapes, finiteness, parameter
//! bounds) before handing values to the math layer; all failures are
//! `Validation` errors. Parsers accept untrusted input: sizes are capped and
//! arithmetic on dimensions is overflow checked.

use num_complex::Complex64 as C64;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::domains::{check_point_shape, Family};
use crate::error::{Error, Result};
use crate::lie::{build_algebra, LieHom};
use crate::numeric::CMatrix;
use crate::toledo::SurfaceGroupRep;

/// Largest accepted family parameter. Acceptance suites use parameters up to
/// 6; the cap only guards against pathological inputs.
pub const MAX_PARAM: usize = 64;

/// Largest accepted genus for representation input.
pub const MAX_GENUS: usize = 64;

/// Largest accepted matrix side length.
pub const MAX_DIM: usize = 512;

/// Largest accepted family parameter in homomorphism input. Parsing a
/// homomorphism builds both Lie algebras, whose basis storage grows with the
/// fourth power of the parameter, so the cap is much smaller than MAX_PARAM.
pub const MAX_HOM_PARAM: usize = 12;

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

fn matrix_from_json(m: &MatrixJson) -> Result<CMatrix> {
    if m.rows == 0 || m.cols == 0 || m.rows > MAX_DIM || m.cols > MAX_DIM {
        return Err(Error::Validation(format!(
            "matrix dimensions {}x{} outside 1..={MAX_DIM}",
            m.rows, m.cols
        )));
    }
    let expected = m
        .rows
        .checked_mul(m.cols)
        .ok_or_else(|| Error::Validation("matrix dimension product overflows".into()))?;
    if m.data.len() != expected {
        return Err(Error::Validation(format!(
            "matrix data has {} entries, expected {} for {}x{}",
            m.data.len(),
            expected,
            m.rows,
            m.cols
        )));
    }
    let mut out = CMatrix::zeros(m.rows, m.cols);
    for (idx, [re, im]) in m.data.iter().enumerate() {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Validation(format!(
                "matrix entry {idx} is not finite"
            )));
        }
        out.data[idx] = C64::new(*re, *im);
    }
    Ok(out)
}

/// Parses `{"rows":m,"cols":n,"data":[[re,im],...]}` (row-major).
pub fn parse_matrix(s: &str) -> Result<CMatrix> {
    let m: MatrixJson =
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("matrix JSON: {e}")))?;
    matrix_from_json(&m)
}

/// Rounds to 12 significant digits; output formatting applies this to every
/// floating value so that equal computations print byte-identically.
///
/// Round trips through a 12-digit decimal string, so the shortest
/// representation of the result never exceeds 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Matrix as a JSON value in the parse_matrix schema, entries rounded to 12
/// significant digits.
pub fn matrix_to_json(m: &CMatrix) -> Value {
    let data: Vec<Value> = m
        .data
        .iter()
        .map(|z| json!([round_sig12(z.re), round_sig12(z.im)]))
        .collect();
    json!({ "rows": m.rows, "cols": m.cols, "data": data })
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

fn param_value(params: &Map<String, Value>, key: &str) -> Result<usize> {
    let v = params
        .get(key)
        .ok_or_else(|| Error::Validation(format!("params missing \"{key}\"")))?;
    let n = v
        .as_u64()
        .ok_or_else(|| Error::Validation(format!("param \"{key}\" must be a positive integer")))?;
    if n == 0 || n as usize > MAX_PARAM {
        return Err(Error::Validation(format!(
            "param \"{key}\" = {n} outside 1..={MAX_PARAM}"
        )));
    }
    Ok(n as usize)
}

/// Builds a family from its JSON tag and params object. The su family takes
/// `{"p":..,"q":..}`; the others take `{"n":..}`; extra keys are rejected.
pub fn family_from_parts(tag: &str, params: &Value) -> Result<Family> {
    let obj = params
        .as_object()
        .ok_or_else(|| Error::Validation("params must be an object".into()))?;
    let expected_keys: &[&str] = if tag == "su" { &["p", "q"] } else { &["n"] };
    for key in obj.keys() {
        if !expected_keys.contains(&key.as_str()) {
            return Err(Error::Validation(format!(
                "unexpected param \"{key}\" for family {tag}"
            )));
        }
    }
    let family = match tag {
        "su" => Family::Su {
            p: param_value(obj, "p")?,
            q: param_value(obj, "q")?,
        },
        "sp" => Family::Sp {
            n: param_value(obj, "n")?,
        },
        "sostar" => Family::SoStar {
            n: param_value(obj, "n")?,
        },
        "so2" => Family::So2 {
            n: param_value(obj, "n")?,
        },
        other => {
            return Err(Error::Validation(format!(
                "unknown family \"{other}\" (expected su, sp, sostar, so2)"
            )))
        }
    };
    family.validate()?;
    Ok(family)
}

/// The JSON tag and params object of a family, inverse to family_from_parts.
pub fn family_to_parts(family: Family) -> (String, Value) {
    match family {
        Family::Su { p, q } => ("su".into(), json!({ "p": p, "q": q })),
        Family::Sp { n } => ("sp".into(), json!({ "n": n })),
        Family::SoStar { n } => ("sostar".into(), json!({ "n": n })),
        Family::So2 { n } => ("so2".into(), json!({ "n": n })),
    }
}

// ---------------------------------------------------------------------------
// Points and triples
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    family: String,
    params: Value,
    #[serde(rename = "Z")]
    z: MatrixJson,
}

/// Parses `{"family":..,"params":..,"Z":matrix}`; the matrix must have the
/// point shape of the family.
pub fn parse_point(s: &str) -> Result<(Family, CMatrix)> {
    let p: PointJson =
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("point JSON: {e}")))?;
    let family = family_from_parts(&p.family, &p.params)?;
    let z = matrix_from_json(&p.z)?;
    check_point_shape(family, &z)?;
    Ok((family, z))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleJson {
    family: String,
    params: Value,
    x: MatrixJson,
    y: MatrixJson,
    z: MatrixJson,
}

/// Parses `{"family":..,"params":..,"x":matrix,"y":matrix,"z":matrix}`; all
/// three matrices must have the point shape of the family.
pub fn parse_triple(s: &str) -> Result<(Family, CMatrix, CMatrix, CMatrix)> {
    let t: TripleJson =
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("triple JSON: {e}")))?;
    let family = family_from_parts(&t.family, &t.params)?;
    let x = matrix_from_json(&t.x)?;
    let y = matrix_from_json(&t.y)?;
    let z = matrix_from_json(&t.z)?;
    for m in [&x, &y, &z] {
        check_point_shape(family, m)?;
    }
    Ok((family, x, y, z))
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepJson {
    genus: usize,
    family: String,
    params: Value,
    #[serde(rename = "A")]
    a: Vec<MatrixJson>,
    #[serde(rename = "B")]
    b: Vec<MatrixJson>,
}

/// Parses `{"genus":g,"family":..,"params":..,"A":[matrix..],"B":[matrix..]}`.
/// Checks counts and matrix sizes; group membership and the relator are
/// checked by the Toledo operations.
pub fn parse_rep(s: &str) -> Result<SurfaceGroupRep> {
    let r: RepJson =
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("rep JSON: {e}")))?;
    let family = family_from_parts(&r.family, &r.params)?;
    if r.genus == 0 || r.genus > MAX_GENUS {
        return Err(Error::Validation(format!(
            "genus {} outside 1..={MAX_GENUS}",
            r.genus
        )));
    }
    if r.a.len() != r.genus || r.b.len() != r.genus {
        return Err(Error::Validation(format!(
            "genus {} needs {} A and {} B matrices, got {} and {}",
            r.genus,
            r.genus,
            r.genus,
            r.a.len(),
            r.b.len()
        )));
    }
    let dim = family.ambient_dim();
    let to_group = |list: &[MatrixJson], label: &str| -> Result<Vec<CMatrix>> {
        list.iter()
            .enumerate()
            .map(|(i, mj)| {
                let m = matrix_from_json(mj)?;
                if m.rows != dim || m.cols != dim {
                    return Err(Error::Validation(format!(
                        "generator {label}_{} must be {dim}x{dim}, got {}x{}",
                        i + 1,
                        m.rows,
                        m.cols
                    )));
                }
                Ok(m)
            })
            .collect()
    };
    Ok(SurfaceGroupRep {
        family,
        genus: r.genus,
        a: to_group(&r.a, "A")?,
        b: to_group(&r.b, "B")?,
    })
}

/// Representation as a JSON value in the parse_rep schema.
pub fn rep_to_json(rep: &SurfaceGroupRep) -> Value {
    let (tag, params) = family_to_parts(rep.family);
    json!({
        "genus": rep.genus,
        "family": tag,
        "params": params,
        "A": rep.a.iter().map(matrix_to_json).collect::<Vec<_>>(),
        "B": rep.b.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    family: String,
    params: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HomJson {
    source: FamilyJson,
    target: FamilyJson,
    images: Vec<MatrixJson>,
}

/// Parses `{"source":{family,params},"target":{family,params},
/// "images":[matrix..]}`. The images are ordered like the source basis:
/// compact part first, then the off-diagonal part, in build_algebra order.
/// Shape and count errors are Validation; bracket preservation is checked by
/// the tightness operations.
pub fn parse_hom(s: &str) -> Result<LieHom> {
    let h: HomJson =
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("hom JSON: {e}")))?;
    let source_family = family_from_parts(&h.source.family, &h.source.params)?;
    let target_family = family_from_parts(&h.target.family, &h.target.params)?;
    for (side, family) in [("source", source_family), ("target", target_family)] {
        let largest = match family {
            Family::Su { p, q } => p.max(q),
            Family::Sp { n } | Family::SoStar { n } | Family::So2 { n } => n,
        };
        if largest > MAX_HOM_PARAM {
            return Err(Error::Validation(format!(
                "hom {side} family {} exceeds the parameter cap {MAX_HOM_PARAM}",
                family.name()
            )));
        }
    }
    let source = build_algebra(source_family)?;
    let target = build_algebra(target_family)?;
    if h.images.len() != source.dim() {
        return Err(Error::Validation(format!(
            "hom needs {} images (source algebra dimension), got {}",
            source.dim(),
            h.images.len()
        )));
    }
    let dim = target.ambient_dim();
    let images = h
        .images
        .iter()
        .enumerate()
        .map(|(i, mj)| {
            let m = matrix_from_json(mj)?;
            if m.rows != dim || m.cols != dim {
                return Err(Error::Validation(format!(
                    "image {i} must be {dim}x{dim}, got {}x{}",
                    m.rows, m.cols
                )));
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LieHom {
        source,
        target,
        images,
    })
}

/// Homomorphism as a JSON value in the parse_hom schema.
pub fn hom_to_json(hom: &LieHom) -> Value {
    let (s_tag, s_params) = family_to_parts(hom.source.family);
    let (t_tag, t_params) = family_to_parts(hom.target.family);
    json!({
        "source": { "family": s_tag, "params": s_params },
        "target": { "family": t_tag, "params": t_params },
        "images": hom.images.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::identity_hom;
    use crate::toledo::fuchsian_genus2;

    #[test]
    fn matrix_round_trip_preserves_values() {
        let mut m = CMatrix::zeros(2, 3);
        m[(0, 1)] = C64::new(1.25, -0.5);
        m[(1, 2)] = C64::new(-3.0, 0.125);
        let s = matrix_to_json(&m).to_string();
        let back = parse_matrix(&s).unwrap();
        assert_eq!(back.rows, 2);
        assert_eq!(back.cols, 3);
        assert!(back.sub(&m).max_abs() == 0.0);
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        for bad in [
            r#"{"rows":2,"cols":2,"data":[[1,0]]}"#,
            r#"{"rows":0,"cols":2,"data":[]}"#,
            r#"{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[null,0]]}"#,
            r#"{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[0,0]],"extra":1}"#,
            r#"{"rows":1,"cols":1}"#,
            "not json",
        ] {
            let err = parse_matrix(bad).unwrap_err();
            assert!(err.is_validation(), "input {bad:?} gave {err}");
        }
        // non-finite entries arrive as JSON strings or infinities and must
        // not pass through
        let err = parse_matrix(r#"{"rows":1,"cols":1,"data":[[1e999,0]]}"#).unwrap_err();
        assert!(err.is_validation(), "overflowing literal gave {err}");
    }

    #[test]
    fn family_parsing_accepts_the_four_tags_and_rejects_others() {
        let f = family_from_parts("su", &json!({"p": 2, "q": 3})).unwrap();
        assert_eq!(f, Family::Su { p: 2, q: 3 });
        let f = family_from_parts("sostar", &json!({"n": 4})).unwrap();
        assert_eq!(f, Family::SoStar { n: 4 });
        for (tag, params) in [
            ("slq", json!({"n": 2})),
            ("su", json!({"p": 2})),
            ("su", json!({"p": 2, "q": 3, "r": 1})),
            ("sp", json!({"n": 0})),
            ("sp", json!({"n": 1000})),
            ("sp", json!({"p": 1, "q": 1})),
            ("so2", json!(null)),
        ] {
            let err = family_from_parts(tag, &params).unwrap_err();
            assert!(err.is_validation(), "({tag}, {params}) gave {err}");
        }
    }

    #[test]
    fn point_and_triple_shapes_are_enforced() {
        let good = r#"{"family":"sp","params":{"n":1},"Z":{"rows":1,"cols":1,"data":[[0.5,0]]}}"#;
        let (f, z) = parse_point(good).unwrap();
        assert_eq!(f, Family::Sp { n: 1 });
        assert_eq!(z[(0, 0)], C64::new(0.5, 0.0));

        let bad = r#"{"family":"sp","params":{"n":2},"Z":{"rows":1,"cols":1,"data":[[0.5,0]]}}"#;
        assert!(parse_point(bad).unwrap_err().is_validation());

        let triple = r#"{"family":"su","params":{"p":1,"q":1},
            "x":{"rows":1,"cols":1,"data":[[1,0]]},
            "y":{"rows":1,"cols":1,"data":[[0,1]]},
            "z":{"rows":1,"cols":1,"data":[[-1,0]]}}"#;
        let (f, x, _y, z) = parse_triple(triple).unwrap();
        assert_eq!(f, Family::Su { p: 1, q: 1 });
        assert_eq!(x[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(z[(0, 0)], C64::new(-1.0, 0.0));
    }

    #[test]
    fn rep_round_trip_preserves_the_fixture() {
        let rep = fuchsian_genus2();
        let s = rep_to_json(&rep).to_string();
        let back = parse_rep(&s).unwrap();
        assert_eq!(back.family, rep.family);
        assert_eq!(back.genus, 2);
        for i in 0..2 {
            // 12 significant digits keep generators to ~1e-12 relative error
            assert!(back.a[i].sub(&rep.a[i]).max_abs() < 1e-11);
            assert!(back.b[i].sub(&rep.b[i]).max_abs() < 1e-11);
        }
        let bad = s.replace("\"genus\":2", "\"genus\":3");
        assert!(parse_rep(&bad).unwrap_err().is_validation());
    }

    #[test]
    fn hom_round_trip_preserves_identity_hom() {
        let hom = identity_hom(Family::Sp { n: 2 }).unwrap();
        let s = hom_to_json(&hom).to_string();
        let back = parse_hom(&s).unwrap();
        back.validate().expect("round-tripped hom must validate");
        assert_eq!(back.images.len(), hom.images.len());

        // removing one image must fail the count check
        let mut v: Value = serde_json::from_str(&s).unwrap();
        let arr = v["images"].as_array_mut().unwrap();
        arr.pop();
        assert!(parse_hom(&v.to_string()).unwrap_err().is_validation());
    }

    #[test]
    fn hom_parsing_caps_family_parameters() {
        // a parameter above MAX_HOM_PARAM must be rejected before any
        // algebra is built
        let s = format!(
            "{{\"source\":{{\"family\":\"sp\",\"params\":{{\"n\":1}}}},\
             \"target\":{{\"family\":\"sp\",\"params\":{{\"n\":{}}}}},\"images\":[]}}",
            MAX_HOM_PARAM + 1
        );
        let err = parse_hom(&s).unwrap_err();
        assert!(err.is_validation(), "got {err}");
        assert!(err.detail().contains("parameter cap"), "got {err}");
    }

    #[test]
    fn sig12_rounding_is_stable() {
        assert_eq!(round_sig12(0.0), 0.0);
        assert_eq!(round_sig12(12.566370614359172), 12.5663706144);
        assert_eq!(round_sig12(-1.0 / 3.0), -0.333333333333);
        assert_eq!(round_sig12(1.23456789012345e-7), 1.23456789012e-7);
    }
}

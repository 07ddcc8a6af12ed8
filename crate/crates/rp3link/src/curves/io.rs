//! Line-oriented text format for curve files.
//!
//! ```text
//! # comment
//! curve A closure=+1 weight=1
//! v 1.0 0.0 0.0 0.0
//! v 0.0 1.0 0.0 0.0
//! v -1.0 1.0 0.0 0.0
//! end
//! ```
//!
//! A `curve` header opens a block, `v` lines list lift coordinates (four
//! numbers, or three in affine mode, homogenized with w = 1), and `end`
//! closes the block. Vertices are normalized on load; names must be unique.

use std::collections::HashSet;

use crate::config::Tolerances;
use crate::curves::{Closure, LiftedCurve};
use crate::error::{Error, Result};
use crate::projgeom::Vec4;

/// Parses every curve block in `src`. With `affine` set, vertex lines carry
/// three coordinates and are lifted with w = 1.
pub fn parse_curves(src: &str, affine: bool, tol: &Tolerances) -> Result<Vec<LiftedCurve>> {
    let mut curves = Vec::new();
    let mut names: HashSet<String> = HashSet::new();
    let mut block: Option<(String, Closure, i64, Vec<Vec4>, usize)> = None;

    for (idx, raw_line) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap();
        match keyword {
            "curve" => {
                if block.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "`curve` before previous block was closed with `end`".into(),
                    });
                }
                let name = tokens
                    .next()
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: "missing curve name".into(),
                    })?
                    .to_string();
                if !names.insert(name.clone()) {
                    return Err(Error::DuplicateCurve { name });
                }
                let mut closure = Closure::Plus;
                let mut weight = 1i64;
                for tok in tokens {
                    if let Some(value) = tok.strip_prefix("closure=") {
                        let sign: i32 = value.parse().map_err(|_| Error::Parse {
                            line: line_no,
                            message: format!("bad closure value `{value}`"),
                        })?;
                        closure = Closure::from_sign(sign).ok_or_else(|| Error::Parse {
                            line: line_no,
                            message: format!("closure must be +1 or -1, got `{value}`"),
                        })?;
                    } else if let Some(value) = tok.strip_prefix("weight=") {
                        weight = value.parse().map_err(|_| Error::Parse {
                            line: line_no,
                            message: format!("bad weight value `{value}`"),
                        })?;
                    } else {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("unexpected token `{tok}` in curve header"),
                        });
                    }
                }
                block = Some((name, closure, weight, Vec::new(), line_no));
            }
            "v" => {
                let block = block.as_mut().ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "vertex line outside a curve block".into(),
                })?;
                let coords: Vec<f64> = tokens
                    .map(|t| {
                        t.parse().map_err(|_| Error::Parse {
                            line: line_no,
                            message: format!("bad coordinate `{t}`"),
                        })
                    })
                    .collect::<Result<_>>()?;
                let expected = if affine { 3 } else { 4 };
                if coords.len() != expected {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected {expected} coordinates, got {}", coords.len()),
                    });
                }
                let v: Vec4 = if affine {
                    [coords[0], coords[1], coords[2], 1.0]
                } else {
                    [coords[0], coords[1], coords[2], coords[3]]
                };
                block.3.push(v);
            }
            "end" => {
                let (name, closure, weight, verts, header_line) =
                    block.take().ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: "`end` without an open curve block".into(),
                    })?;
                let curve = LiftedCurve::new(&name, &verts, closure, weight, tol).map_err(
                    |e| match e {
                        Error::ZeroVector => Error::Parse {
                            line: header_line,
                            message: format!("curve `{name}` contains a zero vertex"),
                        },
                        other => other,
                    },
                )?;
                curves.push(curve);
            }
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown keyword `{other}`"),
                });
            }
        }
    }
    if let Some((name, ..)) = block {
        return Err(Error::Parse {
            line: src.lines().count(),
            message: format!("curve `{name}` has no `end`"),
        });
    }
    Ok(curves)
}

/// Serializes curves in the block format read by [`parse_curves`].
/// Deterministic: identical inputs produce identical bytes.
pub fn write_curves(curves: &[LiftedCurve]) -> String {
    let mut out = String::new();
    for c in curves {
        let sign = match c.closure() {
            Closure::Plus => "+1",
            Closure::Minus => "-1",
        };
        out.push_str(&format!(
            "curve {} closure={} weight={}\n",
            c.name(),
            sign,
            c.weight()
        ));
        for v in c.vertices() {
            let x = v.coords();
            out.push_str(&format!("v {} {} {} {}\n", x[0], x[1], x[2], x[3]));
        }
        out.push_str("end\n");
    }
    out
}

/// Finds a curve by name in a parsed file.
pub fn find_curve<'a>(curves: &'a [LiftedCurve], name: &str) -> Result<&'a LiftedCurve> {
    curves
        .iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::UnknownCurve { name: name.into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn roundtrip_preserves_curves() {
        let src = "\
# a square and a line
curve A closure=+1 weight=2
v 1 0 0 0
v 0 1 0 0
v -1 0 0 0
v 0 -1 0 0
end

curve B closure=-1 weight=1
v 1 0 0 0
v 1 1 0 0
v 0 1 0 0
end
";
        let curves = parse_curves(src, false, &tol()).unwrap();
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[0].name(), "A");
        assert_eq!(curves[0].weight(), 2);
        assert_eq!(curves[1].closure(), Closure::Minus);

        let text = write_curves(&curves);
        let again = parse_curves(&text, false, &tol()).unwrap();
        assert_eq!(write_curves(&again), text);
    }

    #[test]
    fn affine_vertices_are_homogenized() {
        let src = "curve A closure=+1 weight=1\nv 1 0 0\nv 0 1 0\nv -1 -1 0\nend\n";
        let curves = parse_curves(src, true, &tol()).unwrap();
        let v = curves[0].vertices()[0];
        assert!((v.coords()[3] - 1.0 / 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let src = "curve A closure=+1\nv 1 0 0 0\nv 0 1 0 0\nv -1 0 0 1\nend\ncurve A closure=+1\nv 1 0 0 0\nv 0 1 0 0\nv -1 0 0 1\nend\n";
        assert!(matches!(
            parse_curves(src, false, &tol()),
            Err(Error::DuplicateCurve { .. })
        ));
    }

    #[test]
    fn unterminated_block_is_an_error() {
        let src = "curve A closure=+1\nv 1 0 0 0\n";
        assert!(matches!(
            parse_curves(src, false, &tol()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn zero_vertex_is_reported_with_context() {
        let src = "curve A closure=+1\nv 0 0 0 0\nv 0 1 0 0\nv 1 0 0 0\nend\n";
        assert!(matches!(
            parse_curves(src, false, &tol()),
            Err(Error::Parse { .. })
        ));
    }
}

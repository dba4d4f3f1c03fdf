use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::numkernel::QuadRational;

use super::{ExactPoint, Realization};

/// One exact coordinate `a_num/a_den + (b_num/b_den)·√3`.
#[derive(Debug, Deserialize)]
struct ExactCoord {
    a_num: i64,
    a_den: i64,
    b_num: i64,
    b_den: i64,
}

#[derive(Debug, Deserialize)]
struct RealizationFile {
    name: String,
    points: Vec<[f64; 2]>,
    #[serde(default)]
    exact: Option<Vec<[ExactCoord; 2]>>,
}

impl ExactCoord {
    fn to_quad(&self) -> Result<QuadRational> {
        if self.a_den == 0 || self.b_den == 0 {
            return Err(Error::Format("zero denominator in exact coordinate".into()));
        }
        Ok(QuadRational::new(
            BigRational::new(BigInt::from(self.a_num), BigInt::from(self.a_den)),
            BigRational::new(BigInt::from(self.b_num), BigInt::from(self.b_den)),
        ))
    }
}

pub fn realization_from_json(text: &str) -> Result<Realization> {
    let file: RealizationFile = serde_json::from_str(text)?;
    let exact = match file.exact {
        None => None,
        Some(pts) => {
            if pts.len() != file.points.len() {
                return Err(Error::Format(format!(
                    "{} exact points for {} points",
                    pts.len(),
                    file.points.len()
                )));
            }
            Some(
                pts.iter()
                    .map(|[x, y]| Ok([x.to_quad()?, y.to_quad()?]))
                    .collect::<Result<Vec<ExactPoint>>>()?,
            )
        }
    };
    Ok(Realization {
        name: file.name,
        points: file.points,
        exact,
    })
}

// 17 significant digits round-trips every f64
fn fmt_coord(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_exact(q: &QuadRational) -> Result<String> {
    let (a_num, a_den, b_num, b_den) = q
        .to_i64_parts()
        .ok_or_else(|| Error::Format("exact coordinate does not fit in 64-bit parts".into()))?;
    Ok(format!(
        "{{\"a_num\": {a_num}, \"a_den\": {a_den}, \"b_num\": {b_num}, \"b_den\": {b_den}}}"
    ))
}

pub fn realization_to_json(r: &Realization) -> Result<String> {
    let mut out = String::from("{\n");
    out.push_str(&format!(
        "  \"name\": {},\n",
        serde_json::to_string(&r.name)?
    ));
    out.push_str("  \"points\": [");
    for (i, p) in r.points.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("\n    [{}, {}]", fmt_coord(p[0]), fmt_coord(p[1])));
    }
    out.push_str("\n  ]");
    if let Some(exact) = &r.exact {
        out.push_str(",\n  \"exact\": [");
        for (i, [x, y]) in exact.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("\n    [{}, {}]", fmt_exact(x)?, fmt_exact(y)?));
        }
        out.push_str("\n  ]");
    }
    out.push_str("\n}\n");
    Ok(out)
}

pub fn read_realization(path: impl AsRef<Path>) -> Result<Realization> {
    realization_from_json(&fs::read_to_string(path)?)
}

pub fn write_realization(r: &Realization, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, realization_to_json(r)?)?;
    Ok(())
}

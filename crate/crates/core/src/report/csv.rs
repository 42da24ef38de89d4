//! Orbit logs as CSV: one row per iterate, LF line endings, shortest
//! round-trip formatting for every double.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::dynamics::Orbit;
use crate::expr::Value;
use crate::Result;

pub const HEADER: &str = "n,re_f,im_f,re_h,im_h,re_g,im_g,abs_f";

fn parts(v: Value) -> (String, String) {
    match v {
        Value::Finite(c) => (c.re.to_string(), c.im.to_string()),
        Value::Overflow(_) => ("overflow".into(), "overflow".into()),
    }
}

/// Overflowed entries read `overflow`; their `abs_f` reads `inf`.
pub fn orbit_csv(orbit: &Orbit) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for n in 0..orbit.len() {
        let f = orbit.f_track[n];
        let (rf, if_) = parts(f);
        let (rh, ih) = parts(orbit.h_track[n]);
        let (rg, ig) = parts(orbit.g_track[n]);
        let abs = match f {
            Value::Finite(_) => f.abs().to_string(),
            Value::Overflow(_) => "inf".into(),
        };
        writeln!(out, "{n},{rf},{if_},{rh},{ih},{rg},{ig},{abs}").expect("writing to a String");
    }
    out
}

pub fn write_orbit_csv(orbit: &Orbit, path: &Path) -> Result<()> {
    fs::write(path, orbit_csv(orbit))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{orbit, OrbitBudget};
    use crate::harmonic::HarmonicMap;
    use num_complex::Complex64;

    #[test]
    fn rows_and_overflow() {
        let f = HarmonicMap::parse("z^2", "z^2/2").unwrap();
        let b = OrbitBudget {
            max_iter: 12,
            ..OrbitBudget::default()
        };
        let o = orbit(&f, Complex64::new(2.0, 0.0), &b);
        let text = orbit_csv(&o);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HEADER);
        assert_eq!(lines[1], "0,2,0,2,0,2,0,2");
        assert_eq!(lines[2], "1,6,0,4,0,2,0,6");
        assert!(lines
            .last()
            .unwrap()
            .ends_with(",overflow,overflow,overflow,overflow,2,0,inf"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn values_round_trip() {
        let f = HarmonicMap::parse("z^2 + 0.1", "z/3").unwrap();
        let o = orbit(&f, Complex64::new(0.123456789, -0.3), &OrbitBudget::default());
        let text = orbit_csv(&o);
        let row: Vec<&str> = text.lines().nth(3).unwrap().split(',').collect();
        let re: f64 = row[1].parse().unwrap();
        assert_eq!(re, o.f_track[2].finite().unwrap().re);
    }
}

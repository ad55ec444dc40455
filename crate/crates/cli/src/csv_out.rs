//! Exact CSV tables: every number is split into numerator and denominator.

use std::path::Path;

use opdyn::functions::NormValue;
use opdyn::scalar::num_den;
use opdyn::{Error, Scalar};

pub fn fraction<S: Scalar>(x: &S) -> [String; 2] {
    let (n, d) = num_den(&x.to_rational());
    [n, d]
}

/// Irrational norms are written as the upper end of their enclosure.
pub fn norm_fraction<S: Scalar>(x: &NormValue<S>) -> [String; 2] {
    fraction(&x.value())
}

pub fn write(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), Error> {
    let fail =
        |e: &dyn std::fmt::Display| Error::Config(format!("cannot write {}: {e}", path.display()));
    let mut out = csv::Writer::from_path(path).map_err(|e| fail(&e))?;
    out.write_record(header).map_err(|e| fail(&e))?;
    for row in rows {
        out.write_record(row).map_err(|e| fail(&e))?;
    }
    out.flush().map_err(|e| fail(&e))
}

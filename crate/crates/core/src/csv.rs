//! CSV rendering of reports. Floats use 17 significant digits so values
//! round-trip; rows are emitted in ascending `r`, then `m`.

use std::io::{self, Write};

use crate::experiments::{ApproxReport, ConvergenceReport, LimsupReport, SuiteSummary};
use crate::norms::NormResult;
use crate::scalar::Scalar;
use crate::weights::ConditionWitness;

pub trait CsvTable {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub fn float<T: Scalar>(x: T) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(table: &dyn CsvTable, sink: &mut W) -> io::Result<()> {
    writeln!(sink, "{}", table.header().join(","))?;
    for row in table.rows() {
        writeln!(sink, "{}", row.join(","))?;
    }
    sink.flush()
}

pub fn to_csv_string(table: &dyn CsvTable) -> String {
    let mut buf = Vec::new();
    write_csv(table, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

impl<T: Scalar> CsvTable for NormResult<T> {
    fn header(&self) -> Vec<&'static str> {
        vec!["full_norm", "seminorm", "point_term", "flags"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            float(self.full_norm),
            float(self.seminorm),
            float(self.point_term),
            self.flags.describe(),
        ]]
    }
}

impl<T: Scalar> CsvTable for ConvergenceReport<T> {
    fn header(&self) -> Vec<&'static str> {
        vec!["r", "err_seminorm", "err_fullnorm"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| a.r.partial_cmp(&b.r).expect("finite r"));
        rows.iter()
            .map(|row| {
                vec![
                    float(row.r),
                    float(row.err_seminorm),
                    float(row.err_fullnorm),
                ]
            })
            .collect()
    }
}

impl<T: Scalar> CsvTable for LimsupReport<T> {
    fn header(&self) -> Vec<&'static str> {
        vec!["r", "lhs_dz", "lhs_dzbar", "rhs_dz", "rhs_dzbar"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| a.r.partial_cmp(&b.r).expect("finite r"));
        rows.iter()
            .map(|row| {
                vec![
                    float(row.r),
                    float(row.lhs_dz),
                    float(row.lhs_dzbar),
                    float(self.rhs_dz),
                    float(self.rhs_dzbar),
                ]
            })
            .collect()
    }
}

impl<T: Scalar> CsvTable for ApproxReport<T> {
    fn header(&self) -> Vec<&'static str> {
        vec!["r", "m", "error"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| a.r.partial_cmp(&b.r).expect("finite r").then(a.m.cmp(&b.m)));
        rows.iter()
            .map(|row| vec![float(row.r), row.m.to_string(), float(row.error)])
            .collect()
    }
}

impl<T: Scalar> CsvTable for SuiteSummary<T> {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "cell",
            "domain",
            "space",
            "p",
            "weight",
            "function",
            "norm",
            "err_first",
            "err_last",
            "ratio",
            "decreasing",
            "condition_k",
            "condition_c",
            "flags",
            "verdict",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| {
                let (k, c) = match row.condition {
                    Some((k, c)) => (k.to_string(), float(c)),
                    None => ("none".to_string(), "none".to_string()),
                };
                vec![
                    row.id.clone(),
                    row.domain.to_string(),
                    row.kind.to_string(),
                    float(row.p),
                    row.weight.clone(),
                    row.function.to_string(),
                    float(row.norm),
                    float(row.err_first),
                    float(row.err_last),
                    float(row.ratio),
                    row.decreasing.to_string(),
                    k,
                    c,
                    row.flags.clone(),
                    row.verdict.to_string(),
                ]
            })
            .collect()
    }
}

impl<T: Scalar> CsvTable for ConditionWitness<T> {
    fn header(&self) -> Vec<&'static str> {
        vec!["k", "C", "r0", "grid_size", "z_re", "z_im", "r"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let (z, r) = self.sup_at;
        vec![vec![
            self.k.to_string(),
            float(self.c),
            float(self.r0),
            self.grid_size.to_string(),
            float(z.re),
            float(z.im),
            float(r),
        ]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::SuiteSummary;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(float(0.1f64), "1.0000000000000001e-1");
        assert_eq!(float(1.0f64), "1.0000000000000000e0");
        let x = std::f64::consts::PI;
        assert_eq!(float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn empty_summary_is_header_only() {
        let s = SuiteSummary::<f64> { rows: vec![] };
        let text = to_csv_string(&s);
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("cell,domain,space"));
    }
}

//! Report types for the census pipeline and their JSON/CSV serializations.
//!
//! Schemas are versioned; see docs/SCHEMAS.md in the repository root.

use fpgroup::abelian::{AbelianInvariants, QuotientType};
use fpgroup::coset::CosetTable;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

pub const REPORT_SCHEMA: &str = "census-report-v1";
pub const CSV_HEADER: &str =
    "source,h1,n_subgroups,n_conjugacy_classes,n_normal,n1,c4,v4,h1_order4_consistent";

/// Abelian invariants as they appear in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsJson {
    pub display: String,
    pub torsion: Vec<String>,
    pub free_rank: usize,
}

impl From<&AbelianInvariants> for InvariantsJson {
    fn from(inv: &AbelianInvariants) -> Self {
        InvariantsJson {
            display: inv.to_string(),
            torsion: inv.torsion().iter().map(|d| d.to_string()).collect(),
            free_rank: inv.free_rank(),
        }
    }
}

fn serialize_table<S: Serializer>(t: &CosetTable, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(2))?;
    map.serialize_entry("index", &t.index())?;
    let action: std::collections::BTreeMap<&String, &Vec<usize>> =
        t.generator_names().iter().zip(t.action().iter()).collect();
    map.serialize_entry("action", &action)?;
    map.end()
}

/// Everything recorded for one subgroup found by the census.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupRecord {
    #[serde(serialize_with = "serialize_table")]
    pub table: CosetTable,
    pub normal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_type: Option<QuotientType>,
    pub abelian_invariants: InvariantsJson,
    pub b1: usize,
    pub normalizer_index: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QuotientHistogram {
    pub c4: usize,
    pub v4: usize,
}

/// Per-file classification record.
///
/// `n1` counts the normal subgroups of the requested index whose
/// abelianization is finite (first Betti number zero).
/// `h1_order4_expected` is the number of order-four quotients of the
/// ambient abelianization; at index four it must equal `n_normal`, since
/// degree-four normal covers correspond exactly to those quotients. The
/// expectation fields are omitted at other indices.
#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub source: String,
    pub index: usize,
    pub h1: InvariantsJson,
    pub n_subgroups: usize,
    pub n_conjugacy_classes: usize,
    pub n_normal: usize,
    pub n1: usize,
    pub quotient_type_histogram: QuotientHistogram,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1_order4_expected: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1_order4_consistent: Option<bool>,
    pub per_subgroup: Vec<SubgroupRecord>,
}

impl CensusReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.source,
            self.h1.display,
            self.n_subgroups,
            self.n_conjugacy_classes,
            self.n_normal,
            self.n1,
            self.quotient_type_histogram.c4,
            self.quotient_type_histogram.v4,
            self.h1_order4_consistent.map_or(String::new(), |b| b.to_string()),
        )
    }
}

/// A file that failed to process; the rest of the run continues.
#[derive(Clone, Debug, Serialize)]
pub struct FileError {
    pub source: String,
    pub error: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub total_n1: u64,
    /// Each subgroup supports a conjugate pair of complex structures, so
    /// the surface count is twice the lattice count.
    pub doubled: u64,
}

/// Sums the `n1` column over reports, with the conjugate-structure double.
pub fn aggregate(reports: &[CensusReport]) -> Aggregate {
    let total: u64 = reports.iter().map(|r| r.n1 as u64).sum();
    Aggregate { total_n1: total, doubled: 2 * total }
}

/// Whole-run output: one report per readable file, errors alongside.
#[derive(Clone, Debug, Serialize)]
pub struct CensusOutcome {
    pub schema: &'static str,
    pub reports: Vec<CensusReport>,
    pub errors: Vec<FileError>,
    pub aggregate: Aggregate,
}

impl CensusOutcome {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.reports {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dummy_report(n1: usize) -> CensusReport {
        CensusReport {
            source: "x.fp".into(),
            index: 4,
            h1: InvariantsJson { display: "1".into(), torsion: vec![], free_rank: 0 },
            n_subgroups: 0,
            n_conjugacy_classes: 0,
            n_normal: n1,
            n1,
            quotient_type_histogram: QuotientHistogram::default(),
            h1_order4_expected: Some(n1),
            h1_order4_consistent: Some(true),
            per_subgroup: vec![],
        }
    }

    #[test]
    fn aggregate_sums_and_doubles() {
        let reports: Vec<CensusReport> = [3, 1, 19].into_iter().map(dummy_report).collect();
        assert_eq!(aggregate(&reports), Aggregate { total_n1: 23, doubled: 46 });
        assert_eq!(aggregate(&[]), Aggregate { total_n1: 0, doubled: 0 });
    }

    #[test]
    fn csv_rows_have_fixed_width() {
        let r = dummy_report(2);
        assert_eq!(r.csv_row().split(',').count(), CSV_HEADER.split(',').count());
    }
}

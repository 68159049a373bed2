//! The end-to-end census pipeline: parse each presentation file, list its
//! subgroups at the requested index, classify each one (normality, quotient
//! type, subgroup abelianization, normalizer index), and cross-check the
//! normal count against the order-four quotients of the abelianization.

use crate::report::{
    aggregate, CensusOutcome, CensusReport, FileError, InvariantsJson, QuotientHistogram,
    SubgroupRecord, REPORT_SCHEMA,
};
use fpgroup::abelian::{abelianization, count_order4_quotients, QuotientType};
use fpgroup::coset::{coset_enumerate, CosetTable, SubgroupSpec, DEFAULT_MAX_COSETS};
use fpgroup::lowindex::{
    conjugacy_classes, low_index_subgroups_with, LowIndexOptions, SearchMode, DEFAULT_NODE_CAP,
};
use fpgroup::presentation::{parse_presentation, Presentation};
use fpgroup::rewriting::{has_finite_abelianization, subgroup_abelianization};
use fpgroup::word::Word;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("{0}")]
    Parse(#[from] fpgroup::presentation::ParseError),
    #[error("subgroup search failed: {0}")]
    Search(#[from] fpgroup::lowindex::LowIndexError),
    #[error("coset enumeration failed: {0}")]
    Enumeration(#[from] fpgroup::coset::EnumerationError),
    #[error("table error: {0}")]
    Table(#[from] fpgroup::coset::TableError),
    #[error("embedding must give one word per generator ({expected} needed, {got} given)")]
    EmbeddingArity { expected: usize, got: usize },
    #[error("io error on {path}: {err}")]
    Io { path: String, err: String },
}

/// An ambient group and the images of the child group's generators in it.
#[derive(Clone, Debug)]
pub struct SupergroupEmbedding {
    pub presentation: Presentation,
    pub generator_images: Vec<Word>,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub index: usize,
    pub max_cosets: usize,
    pub node_cap: usize,
    pub supergroup: Option<SupergroupEmbedding>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            index: 4,
            max_cosets: DEFAULT_MAX_COSETS,
            node_cap: DEFAULT_NODE_CAP,
            supergroup: None,
        }
    }
}

/// Classifies one presented group.
pub fn analyze_presentation(
    source: &str,
    p: &Presentation,
    opts: &CensusOptions,
) -> Result<CensusReport, CensusError> {
    if let Some(emb) = &opts.supergroup {
        if emb.generator_images.len() != p.generator_count() {
            return Err(CensusError::EmbeddingArity {
                expected: p.generator_count(),
                got: emb.generator_images.len(),
            });
        }
        for w in &emb.generator_images {
            emb.presentation
                .validate_word(w)
                .map_err(|e| CensusError::Io { path: source.into(), err: e.to_string() })?;
        }
    }

    let h1 = abelianization(p);
    let all = low_index_subgroups_with(
        p,
        opts.index,
        SearchMode::All,
        &LowIndexOptions { node_cap: opts.node_cap },
    )?;
    let at_index: Vec<CosetTable> =
        all.into_iter().filter(|t| t.index() == opts.index).collect();
    let n_conjugacy_classes = conjugacy_classes(&at_index).len();

    let mut per_subgroup = Vec::with_capacity(at_index.len());
    let mut histogram = QuotientHistogram::default();
    let mut n_normal = 0;
    let mut n1 = 0;
    for table in at_index {
        let subgroup_generators = table.schreier_generators();
        let normal = table.is_normal_for(&SubgroupSpec::new(subgroup_generators.clone()))?;
        let inv = subgroup_abelianization(p, &table);
        let quotient_type = if normal && opts.index == 4 {
            let qt = table.quotient_type()?;
            match qt {
                QuotientType::C4 => histogram.c4 += 1,
                QuotientType::V4 => histogram.v4 += 1,
            }
            Some(qt)
        } else {
            None
        };
        if normal {
            n_normal += 1;
            if has_finite_abelianization(&inv) {
                n1 += 1;
            }
        }
        let normalizer_index = match &opts.supergroup {
            None => table.normalizer_index(&SubgroupSpec::new(subgroup_generators))?,
            Some(emb) => {
                let images: Vec<Word> = subgroup_generators
                    .iter()
                    .map(|w| w.substitute(&emb.generator_images))
                    .collect();
                let ambient = coset_enumerate(
                    &emb.presentation,
                    &SubgroupSpec::new(images.clone()),
                    opts.max_cosets,
                )?;
                ambient.normalizer_index(&SubgroupSpec::new(images))?
            }
        };
        per_subgroup.push(SubgroupRecord {
            b1: inv.free_rank(),
            abelian_invariants: InvariantsJson::from(&inv),
            table,
            normal,
            quotient_type,
            normalizer_index,
        });
    }

    let (expected, consistent) = if opts.index == 4 {
        let e = count_order4_quotients(&h1);
        (Some(e), Some(e == n_normal))
    } else {
        (None, None)
    };

    Ok(CensusReport {
        source: source.to_string(),
        index: opts.index,
        h1: InvariantsJson::from(&h1),
        n_subgroups: per_subgroup.len(),
        n_conjugacy_classes,
        n_normal,
        n1,
        quotient_type_histogram: histogram,
        h1_order4_expected: expected,
        h1_order4_consistent: consistent,
        per_subgroup,
    })
}

/// Runs the census over named presentation texts; errors are collected per
/// file and never abort the other files. Inputs are processed in the given
/// order, so sort names first for deterministic output.
pub fn run_census_on_texts(
    inputs: &[(String, String)],
    opts: &CensusOptions,
) -> CensusOutcome {
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (name, text) in inputs {
        let result = parse_presentation(text)
            .map_err(CensusError::from)
            .and_then(|p| analyze_presentation(name, &p, opts));
        match result {
            Ok(r) => reports.push(r),
            Err(e) => errors.push(FileError { source: name.clone(), error: e.to_string() }),
        }
    }
    let aggregate = aggregate(&reports);
    CensusOutcome { schema: REPORT_SCHEMA, reports, errors, aggregate }
}

/// Runs the census over every `*.fp` file in a directory, in lexicographic
/// filename order.
pub fn run_census_on_dir(dir: &Path, opts: &CensusOptions) -> Result<CensusOutcome, CensusError> {
    let io_err = |e: std::io::Error| CensusError::Io {
        path: dir.display().to_string(),
        err: e.to_string(),
    };
    let mut names: Vec<std::path::PathBuf> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "fp"))
        .collect();
    names.sort();
    let mut inputs = Vec::new();
    for path in names {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        match std::fs::read_to_string(&path) {
            Ok(text) => inputs.push((name, text)),
            Err(e) => inputs.push((name, format!("# unreadable: {e}"))),
        }
    }
    Ok(run_census_on_texts(&inputs, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analyze(dsl: &str) -> CensusReport {
        let p = parse_presentation(dsl).unwrap();
        analyze_presentation("test.fp", &p, &CensusOptions::default()).unwrap()
    }

    #[test]
    fn klein_group_census() {
        let r = analyze("< a, b | a^2, b^2, [a,b] >");
        assert_eq!(r.n_subgroups, 1);
        assert_eq!(r.n_normal, 1);
        assert_eq!(r.n1, 1);
        assert_eq!(r.quotient_type_histogram, QuotientHistogram { c4: 0, v4: 1 });
        assert_eq!(r.h1_order4_consistent, Some(true));
        assert_eq!(r.per_subgroup[0].normalizer_index, 4);
    }

    #[test]
    fn free_group_census() {
        let r = analyze("< a, b | >");
        assert_eq!(r.n_normal, 7);
        assert_eq!(r.quotient_type_histogram, QuotientHistogram { c4: 6, v4: 1 });
        // every index-4 subgroup of F2 is free of rank 5
        assert_eq!(r.n1, 0);
        assert!(r.per_subgroup.iter().all(|s| s.b1 == 5 || !s.normal));
        assert_eq!(r.h1_order4_expected, Some(7));
        assert_eq!(r.h1_order4_consistent, Some(true));
    }

    #[test]
    fn cyclic_eight_census() {
        let r = analyze("< a | a^8 >");
        assert_eq!((r.n_subgroups, r.n_normal, r.n1), (1, 1, 1));
        assert_eq!(r.quotient_type_histogram, QuotientHistogram { c4: 1, v4: 0 });
        assert_eq!(r.per_subgroup[0].abelian_invariants.display, "C2");
    }

    #[test]
    fn infinite_cyclic_census_has_positive_b1() {
        let r = analyze("< a | >");
        assert_eq!((r.n_subgroups, r.n_normal, r.n1), (1, 1, 0));
        assert_eq!(r.per_subgroup[0].b1, 1);
        assert_eq!(r.h1_order4_consistent, Some(true));
    }

    #[test]
    fn no_subgroups_at_index_four_is_still_consistent() {
        let r = analyze("< a, b | a^2, b^2, (a*b)^3 >");
        assert_eq!((r.n_subgroups, r.n_normal, r.n1), (0, 0, 0));
        assert_eq!(r.h1_order4_expected, Some(0));
        assert_eq!(r.h1_order4_consistent, Some(true));
    }

    #[test]
    fn errors_do_not_abort_other_files() {
        let inputs = vec![
            ("bad.fp".to_string(), "< a | senseless".to_string()),
            ("good.fp".to_string(), "< a | a^8 >".to_string()),
        ];
        let out = run_census_on_texts(&inputs, &CensusOptions::default());
        assert_eq!(out.reports.len(), 1);
        assert_eq!(out.errors.len(), 1);
        assert_eq!(out.errors[0].source, "bad.fp");
        assert!(out.errors[0].error.contains("line"));
    }

    #[test]
    fn normalizer_in_an_ambient_group() {
        // V4 = <a, b> inside S4 = <s, t | s^2, t^3, (st)^4>: the double
        // transpositions are (st)^2 and its conjugate by t.
        let s4 = parse_presentation("< s, t | s^2, t^3, (s*t)^4 >").unwrap();
        let v4 = parse_presentation("< a, b | a^2, b^2, [a,b] >").unwrap();
        let st2 = Word::new([1, 2, 1, 2]);
        let conj = Word::new([-2, 1, 2, 1, 2, 2]);
        let opts = CensusOptions {
            supergroup: Some(SupergroupEmbedding {
                presentation: s4,
                generator_images: vec![st2, conj],
            }),
            ..Default::default()
        };
        let r = analyze_presentation("v4.fp", &v4, &opts).unwrap();
        // the subgroup of index 4 in V4 is trivial; its normalizer in S4 is
        // all of S4, so the reported index is |S4| = 24
        assert_eq!(r.n_subgroups, 1);
        assert_eq!(r.per_subgroup[0].normalizer_index, 24);
    }

    #[test]
    fn census_runs_are_deterministic() {
        let inputs = vec![
            ("f2.fp".to_string(), "< a, b | >".to_string()),
            ("k.fp".to_string(), "< a, b | a^2, b^2, [a,b] >".to_string()),
        ];
        let once = run_census_on_texts(&inputs, &CensusOptions::default());
        let twice = run_census_on_texts(&inputs, &CensusOptions::default());
        assert_eq!(once.to_json(), twice.to_json());
        assert_eq!(once.to_csv(), twice.to_csv());
    }
}

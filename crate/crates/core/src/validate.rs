//! Syllabus error scanning: unknown or misspelled prerequisite references,
//! cycles, self-prerequisites, duplicate titles, attribute range breaches,
//! and pass-through of ingest problems. The scanner only reports; it never
//! rewrites the catalog.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::detect_cycles;
use crate::ingest::{IngestIssue, IngestKind};
use crate::model::{fold_title, CourseCode, CourseRef, CurriculumGraph};

/// Levenshtein distance (unit-cost insert/delete/substitute) over the Unicode
/// scalar values of the case-folded, whitespace-normalized inputs.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = fold_title(a).chars().collect();
    let b: Vec<char> = fold_title(b).chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }

    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut current = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        current[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let cost = usize::from(ca != cb);
            current[j + 1] = (prev[j + 1] + 1)
                .min(current[j] + 1)
                .min(prev[j] + cost);
        }
        std::mem::swap(&mut prev, &mut current);
    }
    prev[b.len()]
}

/// One ranked correction candidate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Suggestion {
    pub distance: usize,
    pub code: CourseCode,
}

/// Candidate corrections for a reference that failed to resolve: real courses
/// whose title (for title refs) or display code (for code refs) is close
/// enough, sorted by (distance, code), at most five.
///
/// The per-candidate bound is `max(2, longer_len / 4)` capped at
/// `max_distance`, so short codes stay tight while long titles tolerate more
/// drift.
pub fn suggest_corrections(
    unknown: &CourseRef,
    g: &CurriculumGraph,
    max_distance: usize,
) -> Vec<Suggestion> {
    let needle = unknown.display_text();
    let needle_len = fold_title(&needle).chars().count();

    let mut out: Vec<Suggestion> = Vec::new();
    for (code, course) in g.courses() {
        let candidate = match unknown {
            CourseRef::ByTitle(_) => course.title.clone(),
            CourseRef::ByCode(_) => code.to_string(),
        };
        let candidate_len = fold_title(&candidate).chars().count();
        let longer = needle_len.max(candidate_len);
        let threshold = 2.max(longer / 4).min(max_distance);
        let distance = edit_distance(&needle, &candidate);
        if distance <= threshold {
            out.push(Suggestion {
                distance,
                code: code.clone(),
            });
        }
    }
    out.sort();
    out.truncate(5);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
            Severity::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IssueKind {
    UnknownPrereq,
    ProbableTypo,
    Cycle,
    SelfPrereq,
    DuplicateTitle,
    CreditsOutOfRange,
    OverEnrolled,
    SyntheticCode,
    /// A loader/builder issue passed through into the report.
    Ingest(IngestKind),
}

impl IssueKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IssueKind::UnknownPrereq => "UNKNOWN_PREREQ",
            IssueKind::ProbableTypo => "PROBABLE_TYPO",
            IssueKind::Cycle => "CYCLE",
            IssueKind::SelfPrereq => "SELF_PREREQ",
            IssueKind::DuplicateTitle => "DUPLICATE_TITLE",
            IssueKind::CreditsOutOfRange => "CREDITS_OUT_OF_RANGE",
            IssueKind::OverEnrolled => "OVER_ENROLLED",
            IssueKind::SyntheticCode => "SYNTHETIC_CODE",
            IssueKind::Ingest(k) => k.as_str(),
        }
    }
}

/// One detected syllabus problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub kind: IssueKind,
    pub severity: Severity,
    pub course: CourseCode,
    pub detail: String,
    pub suggestions: Vec<Suggestion>,
}

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    /// Upper bound on suggestion distance (CLI `--max-distance`).
    pub max_distance: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { max_distance: 3 }
    }
}

/// Scan a built graph plus its ingest issues into a deterministically ordered
/// issue list (severity, then course, then kind).
pub fn validate(g: &CurriculumGraph, ingest_issues: &[IngestIssue]) -> Vec<ValidationIssue> {
    validate_with(g, ingest_issues, &ValidateOptions::default())
}

pub fn validate_with(
    g: &CurriculumGraph,
    ingest_issues: &[IngestIssue],
    options: &ValidateOptions,
) -> Vec<ValidationIssue> {
    let mut out: Vec<ValidationIssue> = Vec::new();

    // One issue per (course, unresolved reference) pair. A best suggestion
    // within distance 2 reclassifies the error as a probable typo.
    let mut seen: BTreeSet<(CourseCode, CourseCode)> = BTreeSet::new();
    for edge in g.edges() {
        if !g.is_phantom(&edge.from) || !seen.insert((edge.to.clone(), edge.from.clone())) {
            continue;
        }
        let reference = g
            .phantom_ref(&edge.from)
            .expect("phantom nodes always record their reference");
        let suggestions = suggest_corrections(reference, g, options.max_distance);
        let typo = suggestions.first().is_some_and(|s| s.distance <= 2);
        out.push(ValidationIssue {
            kind: if typo {
                IssueKind::ProbableTypo
            } else {
                IssueKind::UnknownPrereq
            },
            severity: if typo {
                Severity::Warning
            } else {
                Severity::Error
            },
            course: edge.to.clone(),
            detail: format!(
                "prerequisite reference {:?} does not match any course",
                reference.display_text()
            ),
            suggestions,
        });
    }

    for cycle in detect_cycles(g).cycles {
        let mut route: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
        route.push(cycle[0].to_string());
        out.push(ValidationIssue {
            kind: IssueKind::Cycle,
            severity: Severity::Error,
            course: cycle[0].clone(),
            detail: format!("prerequisite cycle: {}", route.join(" -> ")),
            suggestions: Vec::new(),
        });
    }

    for (course, reference) in g.self_references() {
        out.push(ValidationIssue {
            kind: IssueKind::SelfPrereq,
            severity: Severity::Error,
            course: course.clone(),
            detail: format!(
                "course lists itself as a prerequisite via {:?}",
                reference.display_text()
            ),
            suggestions: Vec::new(),
        });
    }

    for duplicate in g.duplicate_titles() {
        out.push(ValidationIssue {
            kind: IssueKind::DuplicateTitle,
            severity: Severity::Warning,
            course: duplicate.duplicate.clone(),
            detail: format!(
                "title {:?} is already used by {}",
                duplicate.title, duplicate.first
            ),
            suggestions: Vec::new(),
        });
    }

    for (code, course) in g.courses() {
        if course.credits.tenths() > 300 {
            out.push(ValidationIssue {
                kind: IssueKind::CreditsOutOfRange,
                severity: Severity::Warning,
                course: code.clone(),
                detail: format!("credits {} outside the range [0, 30]", course.credits),
                suggestions: Vec::new(),
            });
        }
        if course.capacity > 0 && course.enrollment > course.capacity {
            out.push(ValidationIssue {
                kind: IssueKind::OverEnrolled,
                severity: Severity::Warning,
                course: code.clone(),
                detail: format!(
                    "enrollment {} exceeds capacity {}",
                    course.enrollment, course.capacity
                ),
                suggestions: Vec::new(),
            });
        }
    }

    for code in g.synthetic_codes() {
        let title = g
            .course(code)
            .map(|c| c.title.clone())
            .unwrap_or_default();
        out.push(ValidationIssue {
            kind: IssueKind::SyntheticCode,
            severity: Severity::Info,
            course: code.clone(),
            detail: format!("row {:?} had no usable code; {code} was assigned", title),
            suggestions: Vec::new(),
        });
    }

    for issue in ingest_issues {
        let course = g
            .code_for_line(issue.line_number)
            .cloned()
            .unwrap_or_else(|| {
                CourseCode::new("XX", issue.line_number.clamp(1, 99_999), None).unwrap()
            });
        out.push(ValidationIssue {
            kind: IssueKind::Ingest(issue.kind),
            severity: Severity::Info,
            course,
            detail: format!(
                "line {}, field {}: {}",
                issue.line_number, issue.field, issue.message
            ),
            suggestions: Vec::new(),
        });
    }

    out.sort_by(|a, b| {
        (a.severity, &a.course, a.kind, &a.detail).cmp(&(b.severity, &b.course, b.kind, &b.detail))
    });
    out
}

#[derive(Serialize)]
struct SuggestionJson {
    code: String,
    distance: usize,
}

#[derive(Serialize)]
struct IssueJson<'a> {
    kind: &'a str,
    severity: &'a str,
    course: String,
    detail: &'a str,
    suggestions: Vec<SuggestionJson>,
}

/// Canonical JSON report: a top-level array of issue objects with keys
/// `kind, severity, course, detail, suggestions`.
pub fn report_to_json(issues: &[ValidationIssue]) -> String {
    let view: Vec<IssueJson> = issues
        .iter()
        .map(|issue| IssueJson {
            kind: issue.kind.as_str(),
            severity: issue.severity.as_str(),
            course: issue.course.to_string(),
            detail: &issue.detail,
            suggestions: issue
                .suggestions
                .iter()
                .map(|s| SuggestionJson {
                    code: s.code.to_string(),
                    distance: s.distance,
                })
                .collect(),
        })
        .collect();
    serde_json::to_string(&view).expect("report serialization cannot fail")
}

/// Human-readable report, one line per issue.
pub fn report_to_text(issues: &[ValidationIssue], g: &CurriculumGraph) -> String {
    let mut out = String::new();
    for issue in issues {
        out.push_str(&format!(
            "{} {} {}: {}",
            issue.severity.as_str(),
            issue.kind.as_str(),
            issue.course,
            issue.detail
        ));
        if !issue.suggestions.is_empty() {
            let rendered: Vec<String> = issue
                .suggestions
                .iter()
                .map(|s| {
                    let title = g
                        .course(&s.code)
                        .map(|c| format!(" {:?}", c.title))
                        .unwrap_or_default();
                    format!("{}{} (distance {})", s.code, title, s.distance)
                })
                .collect();
            out.push_str(&format!(" (suggestions: {})", rendered.join("; ")));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{ingest_bytes, CatalogFormat};

    /// Independent full-matrix dynamic-programming oracle over the same
    /// folded inputs.
    fn dp_oracle(a: &str, b: &str) -> usize {
        let a: Vec<char> = fold_title(a).chars().collect();
        let b: Vec<char> = fold_title(b).chars().collect();
        let mut m = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in m.iter_mut().enumerate() {
            row[0] = i;
        }
        for j in 0..=b.len() {
            m[0][j] = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let cost = usize::from(a[i - 1] != b[j - 1]);
                m[i][j] = (m[i - 1][j] + 1)
                    .min(m[i][j - 1] + 1)
                    .min(m[i - 1][j - 1] + cost);
            }
        }
        m[a.len()][b.len()]
    }

    #[test]
    fn edit_distance_spot_values_match_oracle() {
        let cases = [
            ("Systems I", "Systems I", 0),
            ("", "abc", 3),
            ("kitten", "sitting", 3),
            ("Algoritms I", "Algorithms I", 1),
        ];
        for (a, b, expected) in cases {
            assert_eq!(dp_oracle(a, b), expected, "oracle disagrees on {a:?}/{b:?}");
            assert_eq!(edit_distance(a, b), expected);
        }
    }

    #[test]
    fn edit_distance_folds_case_and_whitespace() {
        assert_eq!(edit_distance("SYSTEMS   I", "systems i"), 0);
        assert_eq!(edit_distance("a b", "A  B"), 0);
    }

    #[test]
    fn edit_distance_matches_oracle_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let alphabet: Vec<char> = "abcdef &".chars().collect();
        let mut sample = |rng: &mut rand_chacha::ChaCha8Rng| {
            let len = rng.gen_range(0..12);
            (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                .collect::<String>()
        };
        for _ in 0..300 {
            let a = sample(&mut rng);
            let b = sample(&mut rng);
            assert_eq!(edit_distance(&a, &b), dp_oracle(&a, &b), "{a:?} vs {b:?}");
        }
    }

    const HEADER: &str =
        "code,title,category,description,credits,meeting,capacity,enrollment,instructor,main_skills,prerequisites";

    fn graph_from(rows: &[&str]) -> (CurriculumGraph, Vec<IngestIssue>) {
        let mut text = String::from(HEADER);
        for row in rows {
            text.push('\n');
            text.push_str(row);
        }
        ingest_bytes(text.as_bytes(), CatalogFormat::Csv).unwrap()
    }

    fn code(text: &str) -> CourseCode {
        CourseCode::parse(text).unwrap()
    }

    #[test]
    fn clean_catalog_produces_empty_report() {
        let (g, issues) = graph_from(&[
            "CSE 274,Data Abstractions & Structures,,,3.0,,40,35,,,",
            "CSE 374,Algorithms I,,,3.0,,40,30,,,Data Abstractions & Structures",
        ]);
        assert!(issues.is_empty());
        let report = validate(&g, &issues);
        assert!(report.is_empty(), "unexpected issues: {report:?}");
        assert_eq!(report_to_json(&report), "[]");
        assert_eq!(report_to_text(&report, &g), "");
    }

    #[test]
    fn typo_is_reclassified_with_top_suggestion() {
        let (g, issues) = graph_from(&[
            "CSE 274,Data Abstractions & Structures,,,3.0,,,,,,",
            "CSE 374,Algorithms I,,,3.0,,,,,,Data Abstractions & Structures",
            "CSE 385,Database Systems,,,3.0,,,,,,Algoritms I",
        ]);
        let report = validate(&g, &issues);
        assert_eq!(report.len(), 1);
        let issue = &report[0];
        assert_eq!(issue.kind, IssueKind::ProbableTypo);
        assert_eq!(issue.severity, Severity::Warning);
        assert_eq!(issue.course, code("CSE 385"));
        assert_eq!(issue.suggestions[0].code, code("CSE 374"));
        assert_eq!(issue.suggestions[0].distance, 1);
    }

    #[test]
    fn distant_unknown_reference_stays_error_without_suggestions() {
        let (g, issues) = graph_from(&[
            "CSE 274,Data Abstractions & Structures,,,3.0,,,,,,",
            "CSE 385,Database Systems,,,3.0,,,,,,Quantum Basketweaving",
        ]);
        let report = validate(&g, &issues);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].kind, IssueKind::UnknownPrereq);
        assert_eq!(report[0].severity, Severity::Error);
        assert!(report[0].suggestions.is_empty());
    }

    #[test]
    fn suggestion_bound_respects_caller_max_distance() {
        let (g, _) = graph_from(&["CSE 274,Data Abstractions & Structures,,,3.0,,,,,,"]);
        let unknown = CourseRef::ByTitle("Quantum Basketweaving".to_string());
        assert!(suggest_corrections(&unknown, &g, 2).is_empty());
    }

    #[test]
    fn code_references_match_against_display_codes() {
        let (g, _) = graph_from(&[
            "CSE 274,Data Abstractions & Structures,,,3.0,,,,,,",
            "CSE 374,Algorithms I,,,3.0,,,,,,",
        ]);
        let unknown = CourseRef::ByCode(code("CSE 273"));
        let suggestions = suggest_corrections(&unknown, &g, 3);
        assert_eq!(suggestions[0].code, code("CSE 274"));
        assert_eq!(suggestions[0].distance, 1);
    }

    #[test]
    fn planted_cycle_is_one_error() {
        let (g, issues) = graph_from(&[
            "CSE 101,Course A,,,3.0,,,,,,CSE 102",
            "CSE 102,Course B,,,3.0,,,,,,CSE 101",
        ]);
        let report = validate(&g, &issues);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].kind, IssueKind::Cycle);
        assert_eq!(report[0].course, code("CSE 101"));
        assert!(report[0].detail.contains("CSE 101 -> CSE 102 -> CSE 101"));
    }

    #[test]
    fn attribute_breaches_are_warnings() {
        let (g, issues) = graph_from(&[
            "CSE 101,Course A,,,31.0,,,,,,",
            "CSE 102,Course B,,,3.0,,10,12,,,",
        ]);
        let report = validate(&g, &issues);
        let kinds: Vec<IssueKind> = report.iter().map(|i| i.kind).collect();
        assert_eq!(
            kinds,
            vec![IssueKind::CreditsOutOfRange, IssueKind::OverEnrolled]
        );
        assert!(report.iter().all(|i| i.severity == Severity::Warning));
    }

    #[test]
    fn synthetic_codes_and_ingest_issues_are_info() {
        let (g, issues) = graph_from(&[
            ",Renegade Seminar,,,3.0,,,,,,",
            "CSE 102,Course B,,,3.0,,,,,,CSE 101 and or CSE 103",
        ]);
        let report = validate(&g, &issues);
        let kinds: Vec<&str> = report.iter().map(|i| i.kind.as_str()).collect();
        assert_eq!(kinds, vec!["PARSE_ERROR", "SYNTHETIC_CODE"]);
        assert!(report.iter().all(|i| i.severity == Severity::Info));
        // The pass-through entry points at the course built from that line.
        assert_eq!(report[0].course, code("CSE 102"));
    }

    #[test]
    fn report_is_ordered_and_deterministic() {
        let rows = [
            "CSE 900,Overfull,,,3.0,,5,9,,,",
            "CSE 101,Course A,,,3.0,,,,,,CSE 102",
            "CSE 102,Course B,,,3.0,,,,,,CSE 101",
            "CSE 500,Course C,,,3.0,,,,,,Mystery Prereq",
            ",No Code,,,3.0,,,,,,",
        ];
        let (g, issues) = graph_from(&rows);
        let report = validate(&g, &issues);
        let serialized = report_to_json(&report);
        let (g2, issues2) = graph_from(&rows);
        assert_eq!(serialized, report_to_json(&validate(&g2, &issues2)));

        let severities: Vec<Severity> = report.iter().map(|i| i.severity).collect();
        let mut sorted = severities.clone();
        sorted.sort();
        assert_eq!(severities, sorted, "severities not grouped: {report:?}");
    }

    #[test]
    fn duplicate_title_names_both_courses() {
        let (g, issues) = graph_from(&[
            "CSE 101,Systems I,,,3.0,,,,,,",
            "CSE 102,SYSTEMS  I,,,3.0,,,,,,",
        ]);
        let report = validate(&g, &issues);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].kind, IssueKind::DuplicateTitle);
        assert_eq!(report[0].course, code("CSE 102"));
        assert!(report[0].detail.contains("CSE 101"));
    }

    #[test]
    fn self_prerequisite_is_an_error() {
        let (g, issues) = graph_from(&["CSE 101,Course A,,,3.0,,,,,,CSE 101"]);
        let report = validate(&g, &issues);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].kind, IssueKind::SelfPrereq);
        assert_eq!(report[0].severity, Severity::Error);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn metric_identity(a in "[a-f &]{0,20}") {
                prop_assert_eq!(edit_distance(&a, &a), 0);
            }

            #[test]
            fn metric_symmetry(a in "[a-f &]{0,20}", b in "[a-f &]{0,20}") {
                prop_assert_eq!(edit_distance(&a, &b), edit_distance(&b, &a));
            }

            #[test]
            fn metric_triangle(
                a in "[a-f &]{0,14}",
                b in "[a-f &]{0,14}",
                c in "[a-f &]{0,14}",
            ) {
                let ab = edit_distance(&a, &b);
                let bc = edit_distance(&b, &c);
                let ac = edit_distance(&a, &c);
                prop_assert!(ac <= ab + bc, "d(a,c)={ac} > d(a,b)+d(b,c)={}", ab + bc);
            }

            #[test]
            fn zero_distance_means_folded_equality(a in "[a-fA-F ]{0,16}", b in "[a-fA-F ]{0,16}") {
                let zero = edit_distance(&a, &b) == 0;
                prop_assert_eq!(zero, fold_title(&a) == fold_title(&b));
            }
        }
    }
}

//! Catalog loading and graph construction.
//!
//! The loader is permissive: the only fatal conditions are an unreadable
//! byte stream and a header that does not match the interchange schema.
//! Everything else (missing titles, malformed numbers, duplicate codes,
//! unparseable prerequisite clauses) becomes a per-row [`IngestIssue`] so one
//! bad row never blocks the rest of the catalog.

pub mod prereq;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::model::{
    fold_title, normalize_title, Course, CourseCode, CourseRef, Credits, CurriculumGraph,
    DuplicateTitle, GraphParts, PrereqExpr,
};
pub use prereq::{flatten_edges, parse_prereq_expr, print_prereq_expr, PrereqSyntaxError};

/// Exact CSV header of the catalog interchange format.
pub const CSV_COLUMNS: [&str; 11] = [
    "code",
    "title",
    "category",
    "description",
    "credits",
    "meeting",
    "capacity",
    "enrollment",
    "instructor",
    "main_skills",
    "prerequisites",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogFormat {
    Csv,
    Json,
}

/// One catalog row, still untyped: one text field per column plus the line
/// (CSV) or array position (JSON) it came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCourseRecord {
    pub line_number: u32,
    pub code: String,
    pub title: String,
    pub category: String,
    pub description: String,
    pub credits: String,
    pub meeting: String,
    pub capacity: String,
    pub enrollment: String,
    pub instructor: String,
    pub main_skills: String,
    pub prerequisites: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IngestKind {
    MissingRequired,
    MalformedValue,
    DuplicateCode,
    ParseError,
    /// Trailing grade/permission qualifier removed from a prerequisite
    /// clause before parsing.
    StrippedQualifier,
}

impl IngestKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IngestKind::MissingRequired => "MISSING_REQUIRED",
            IngestKind::MalformedValue => "MALFORMED_VALUE",
            IngestKind::DuplicateCode => "DUPLICATE_CODE",
            IngestKind::ParseError => "PARSE_ERROR",
            IngestKind::StrippedQualifier => "STRIPPED_QUALIFIER",
        }
    }
}

/// A per-row ingest problem; never fatal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestIssue {
    pub line_number: u32,
    pub field: String,
    pub kind: IngestKind,
    pub message: String,
}

impl IngestIssue {
    fn new(line: u32, field: &str, kind: IngestKind, message: String) -> Self {
        IngestIssue {
            line_number: line,
            field: field.to_string(),
            kind,
            message,
        }
    }
}

/// Fatal input problem: undecodable bytes, invalid CSV/JSON, or a header
/// that does not match the interchange schema.
#[derive(Debug, Error)]
#[error("{message}")]
pub struct FormatError {
    pub message: String,
}

impl FormatError {
    fn new(message: impl Into<String>) -> Self {
        FormatError {
            message: message.into(),
        }
    }
}

fn strip_bom(bytes: &[u8]) -> &[u8] {
    bytes.strip_prefix(b"\xef\xbb\xbf").unwrap_or(bytes)
}

/// Load the interchange file into raw records plus per-row issues.
pub fn load_catalog(
    bytes: &[u8],
    format: CatalogFormat,
) -> Result<(Vec<RawCourseRecord>, Vec<IngestIssue>), FormatError> {
    let text = std::str::from_utf8(strip_bom(bytes))
        .map_err(|e| FormatError::new(format!("input is not valid UTF-8: {e}")))?;
    match format {
        CatalogFormat::Csv => load_csv(text),
        CatalogFormat::Json => load_json(text),
    }
}

fn load_csv(text: &str) -> Result<(Vec<RawCourseRecord>, Vec<IngestIssue>), FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| FormatError::new(format!("invalid CSV: {e}")))?
        .clone();
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    if got != CSV_COLUMNS {
        return Err(FormatError::new(format!(
            "header does not match catalog schema: expected \"{}\", got \"{}\"",
            CSV_COLUMNS.join(","),
            got.join(",")
        )));
    }

    let mut records = Vec::new();
    let mut issues = Vec::new();
    for result in reader.records() {
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                let line = e
                    .position()
                    .map(|p| p.line() as u32)
                    .unwrap_or(0);
                issues.push(IngestIssue::new(
                    line,
                    "row",
                    IngestKind::MalformedValue,
                    format!("unreadable CSV row: {e}"),
                ));
                continue;
            }
        };
        let line = record.position().map(|p| p.line() as u32).unwrap_or(0);
        if record.len() > CSV_COLUMNS.len() {
            issues.push(IngestIssue::new(
                line,
                "row",
                IngestKind::MalformedValue,
                format!(
                    "row has {} fields, expected {}",
                    record.len(),
                    CSV_COLUMNS.len()
                ),
            ));
            continue;
        }
        let get = |i: usize| record.get(i).unwrap_or("").to_string();
        let raw = RawCourseRecord {
            line_number: line,
            code: get(0),
            title: get(1),
            category: get(2),
            description: get(3),
            credits: get(4),
            meeting: get(5),
            capacity: get(6),
            enrollment: get(7),
            instructor: get(8),
            main_skills: get(9),
            prerequisites: get(10),
        };
        if normalize_title(&raw.title).is_empty() {
            issues.push(IngestIssue::new(
                line,
                "title",
                IngestKind::MissingRequired,
                format!("row at line {line} has no title; row skipped"),
            ));
            continue;
        }
        records.push(raw);
    }
    Ok((records, issues))
}

fn load_json(text: &str) -> Result<(Vec<RawCourseRecord>, Vec<IngestIssue>), FormatError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| FormatError::new(format!("invalid JSON: {e}")))?;
    let array = value
        .as_array()
        .ok_or_else(|| FormatError::new("JSON catalog must be a top-level array of course objects"))?;

    let mut records = Vec::new();
    let mut issues = Vec::new();
    for (index, item) in array.iter().enumerate() {
        let line = index as u32 + 1;
        let Some(obj) = item.as_object() else {
            issues.push(IngestIssue::new(
                line,
                "row",
                IngestKind::MalformedValue,
                format!("array element {index} is not an object: {item}"),
            ));
            continue;
        };
        let mut field_issue = |field: &str, value: &serde_json::Value| {
            issues.push(IngestIssue::new(
                line,
                field,
                IngestKind::MalformedValue,
                format!("unsupported JSON value for {field}: {value}"),
            ));
        };
        let mut text_field = |field: &str| -> String {
            match obj.get(field) {
                None | Some(serde_json::Value::Null) => String::new(),
                Some(serde_json::Value::String(s)) => s.clone(),
                Some(serde_json::Value::Number(n)) => n.to_string(),
                Some(serde_json::Value::Array(items)) if field == "main_skills" => {
                    let mut tags = Vec::new();
                    for it in items {
                        match it {
                            serde_json::Value::String(s) => tags.push(s.clone()),
                            other => field_issue(field, other),
                        }
                    }
                    tags.join(";")
                }
                Some(other) => {
                    field_issue(field, other);
                    String::new()
                }
            }
        };
        let raw = RawCourseRecord {
            line_number: line,
            code: text_field("code"),
            title: text_field("title"),
            category: text_field("category"),
            description: text_field("description"),
            credits: text_field("credits"),
            meeting: text_field("meeting"),
            capacity: text_field("capacity"),
            enrollment: text_field("enrollment"),
            instructor: text_field("instructor"),
            main_skills: text_field("main_skills"),
            prerequisites: text_field("prerequisites"),
        };
        if normalize_title(&raw.title).is_empty() {
            issues.push(IngestIssue::new(
                line,
                "title",
                IngestKind::MissingRequired,
                format!("course object {index} has no title; entry skipped"),
            ));
            continue;
        }
        records.push(raw);
    }
    Ok((records, issues))
}

/// Remove trailing grade/permission qualifiers ("with ... better",
/// "or permission ...") from a clause. Returns the stripped clause and the
/// removed text, if any.
pub fn strip_qualifiers(clause: &str) -> (String, Option<String>) {
    static PATTERNS: OnceLock<Vec<Regex>> = OnceLock::new();
    let patterns = PATTERNS.get_or_init(|| {
        vec![
            Regex::new(r"(?i)[,;]?\s*\bwith\b.*\bbetter\b\s*$").unwrap(),
            Regex::new(r"(?i)[,;]?\s*\bor\s+permission\b.*$").unwrap(),
        ]
    });
    let mut current = clause.to_string();
    let mut removed = Vec::new();
    loop {
        let mut changed = false;
        for re in patterns {
            let found = re.find(&current).map(|m| m.start());
            if let Some(start) = found {
                removed.push(current[start..].trim().to_string());
                current.truncate(start);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if removed.is_empty() {
        (current, None)
    } else {
        (current.trim_end().to_string(), Some(removed.join(" ")))
    }
}

fn synthetic_code(line: u32) -> CourseCode {
    let number = line.clamp(1, 99_999);
    CourseCode::new("XX", number, None).expect("synthetic code is well-formed")
}

/// Assemble a graph from raw records.
///
/// First-wins on duplicate codes and duplicate titles; unresolved references
/// become phantom nodes; nothing here is fatal.
pub fn build_graph(records: &[RawCourseRecord]) -> (CurriculumGraph, Vec<IngestIssue>) {
    let mut issues = Vec::new();
    let mut courses: BTreeMap<CourseCode, Course> = BTreeMap::new();
    let mut title_index: BTreeMap<String, CourseCode> = BTreeMap::new();
    let mut duplicate_titles: Vec<DuplicateTitle> = Vec::new();
    let mut synthetic: BTreeSet<CourseCode> = BTreeSet::new();
    let mut line_to_code: BTreeMap<u32, CourseCode> = BTreeMap::new();

    for record in records {
        let line = record.line_number;
        let title = normalize_title(&record.title);
        if title.is_empty() {
            issues.push(IngestIssue::new(
                line,
                "title",
                IngestKind::MissingRequired,
                format!("record at line {line} has no title; record skipped"),
            ));
            continue;
        }

        let raw_code = record.code.trim();
        let (code, is_synthetic) = if raw_code.is_empty() {
            (synthetic_code(line), true)
        } else {
            match CourseCode::parse(raw_code) {
                Ok(c) => (c, false),
                Err(_) => {
                    issues.push(IngestIssue::new(
                        line,
                        "code",
                        IngestKind::MalformedValue,
                        format!("cannot parse course code {raw_code:?}; synthetic code assigned"),
                    ));
                    (synthetic_code(line), true)
                }
            }
        };

        if let Some(existing) = courses.get(&code) {
            issues.push(IngestIssue::new(
                line,
                "code",
                IngestKind::DuplicateCode,
                format!(
                    "duplicate course code {code} at line {line} (first used by {:?}); row skipped",
                    existing.title
                ),
            ));
            continue;
        }

        let credits = match record.credits.trim() {
            "" => Credits::default(),
            raw => Credits::parse(raw).unwrap_or_else(|| {
                issues.push(IngestIssue::new(
                    line,
                    "credits",
                    IngestKind::MalformedValue,
                    format!("cannot parse credits {raw:?}; defaulting to 0"),
                ));
                Credits::default()
            }),
        };
        let mut count_field = |field: &'static str, raw: &str| -> u32 {
            let raw = raw.trim();
            if raw.is_empty() {
                return 0;
            }
            raw.parse().unwrap_or_else(|_| {
                issues.push(IngestIssue::new(
                    line,
                    field,
                    IngestKind::MalformedValue,
                    format!("cannot parse {field} {raw:?}; defaulting to 0"),
                ));
                0
            })
        };
        let capacity = count_field("capacity", &record.capacity);
        let enrollment = count_field("enrollment", &record.enrollment);

        let main_skills: Vec<String> = record
            .main_skills
            .split(';')
            .map(normalize_title)
            .filter(|s| !s.is_empty())
            .collect();

        let (clause, stripped) = strip_qualifiers(&record.prerequisites);
        if let Some(removed) = stripped {
            issues.push(IngestIssue::new(
                line,
                "prerequisites",
                IngestKind::StrippedQualifier,
                format!("qualifier {removed:?} removed before parsing"),
            ));
        }
        let prereq_expr = match parse_prereq_expr(&clause) {
            Ok(expr) => expr,
            Err(e) => {
                issues.push(IngestIssue::new(
                    line,
                    "prerequisites",
                    IngestKind::ParseError,
                    format!("cannot parse prerequisite clause {clause:?}: {e}"),
                ));
                PrereqExpr::None
            }
        };

        let folded = fold_title(&title);
        match title_index.get(&folded) {
            None => {
                title_index.insert(folded, code.clone());
            }
            Some(first) => duplicate_titles.push(DuplicateTitle {
                title: folded,
                first: first.clone(),
                duplicate: code.clone(),
            }),
        }

        line_to_code.insert(line, code.clone());
        if is_synthetic {
            synthetic.insert(code.clone());
        }
        courses.insert(
            code.clone(),
            Course {
                code,
                title,
                category: normalize_title(&record.category),
                description: record.description.trim().to_string(),
                meeting: normalize_title(&record.meeting),
                main_skills,
                credits,
                capacity,
                enrollment,
                instructor: normalize_title(&record.instructor),
                prereq_expr,
            },
        );
    }

    // Mint phantom codes for unresolved titles: ZZ 1, ZZ 2, ... assigned in
    // folded-title order so identical content always mints identical codes.
    let mut unresolved_titles: BTreeMap<String, String> = BTreeMap::new();
    for course in courses.values() {
        for (reference, _) in course.prereq_expr.leaves() {
            if let CourseRef::ByTitle(t) = reference {
                let folded = fold_title(t);
                if !title_index.contains_key(&folded) {
                    unresolved_titles.entry(folded).or_insert_with(|| t.clone());
                }
            }
        }
    }
    let mut phantom_refs: BTreeMap<CourseCode, CourseRef> = BTreeMap::new();
    let mut title_phantoms: BTreeMap<String, CourseCode> = BTreeMap::new();
    let mut next_phantom = 1u32;
    for (folded, display) in &unresolved_titles {
        let code = loop {
            let candidate = CourseCode::new("ZZ", next_phantom, None).unwrap();
            next_phantom += 1;
            if !courses.contains_key(&candidate) {
                break candidate;
            }
        };
        title_phantoms.insert(folded.clone(), code.clone());
        phantom_refs.insert(code, CourseRef::ByTitle(display.clone()));
    }

    let resolve = |reference: &CourseRef| -> CourseCode {
        match reference {
            CourseRef::ByCode(c) => c.clone(),
            CourseRef::ByTitle(t) => {
                let folded = fold_title(t);
                title_index
                    .get(&folded)
                    .or_else(|| title_phantoms.get(&folded))
                    .cloned()
                    .expect("unresolved titles were pre-minted")
            }
        }
    };

    let mut edges = Vec::new();
    let mut self_refs = Vec::new();
    for (code, course) in &courses {
        let (mut flattened, dropped) = flatten_edges(&course.prereq_expr, code, resolve);
        edges.append(&mut flattened);
        self_refs.extend(dropped.into_iter().map(|r| (code.clone(), r)));
    }
    for edge in &edges {
        if !courses.contains_key(&edge.from) && !phantom_refs.contains_key(&edge.from) {
            phantom_refs.insert(edge.from.clone(), CourseRef::ByCode(edge.from.clone()));
        }
    }

    let graph = CurriculumGraph::from_parts(GraphParts {
        courses,
        title_index,
        edges,
        phantom_refs,
        self_refs,
        synthetic,
        duplicate_titles,
        line_to_code,
    });
    (graph, issues)
}

/// Load and build in one step, concatenating loader and builder issues.
pub fn ingest_bytes(
    bytes: &[u8],
    format: CatalogFormat,
) -> Result<(CurriculumGraph, Vec<IngestIssue>), FormatError> {
    let (records, mut issues) = load_catalog(bytes, format)?;
    let (graph, mut build_issues) = build_graph(&records);
    issues.append(&mut build_issues);
    Ok((graph, issues))
}

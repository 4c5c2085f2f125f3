//! Domain types for courses, course references, prerequisite expressions, and
//! the curriculum graph. Every other module depends only on this one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Collapse runs of whitespace to a single space and trim the ends.
///
/// Idempotent; Unicode text is otherwise preserved.
pub fn normalize_title(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Normalized, case-folded form used for title matching.
pub fn fold_title(raw: &str) -> String {
    normalize_title(raw).to_lowercase()
}

/// Canonical course key: subject, catalog number, optional letter suffix.
///
/// Ordering is (subject, number, suffix), which is the deterministic order
/// used everywhere a set of codes is listed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CourseCode {
    subject: String,
    number: u32,
    suffix: Option<char>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed course code: {text:?}")]
pub struct MalformedCode {
    pub text: String,
}

impl CourseCode {
    /// Build a code from parts, normalizing the subject to uppercase.
    pub fn new(subject: &str, number: u32, suffix: Option<char>) -> Result<Self, MalformedCode> {
        let subject: String = subject.trim().to_uppercase();
        let ok = !subject.is_empty()
            && subject.len() <= 8
            && subject.chars().all(|c| c.is_ascii_uppercase())
            && number > 0
            && number <= 99_999
            && suffix.map_or(true, |c| c.is_ascii_alphabetic());
        if !ok {
            return Err(MalformedCode {
                text: format!("{subject} {number}{}", suffix.map(String::from).unwrap_or_default()),
            });
        }
        Ok(CourseCode {
            subject,
            number,
            suffix: suffix.map(|c| c.to_ascii_uppercase()),
        })
    }

    /// Parse the `SUBJECT NUMBER[SUFFIX]` form. Internal whitespace between
    /// subject and number is optional; the subject is upper-cased.
    pub fn parse(text: &str) -> Result<Self, MalformedCode> {
        let err = || MalformedCode {
            text: text.to_string(),
        };
        let t = text.trim();
        let mut chars = t.char_indices().peekable();

        let mut subject_end = 0;
        while let Some(&(i, c)) = chars.peek() {
            if c.is_ascii_alphabetic() {
                subject_end = i + c.len_utf8();
                chars.next();
            } else {
                break;
            }
        }
        let subject = &t[..subject_end];
        if subject.is_empty() || subject.len() > 8 {
            return Err(err());
        }

        let rest = t[subject_end..].trim_start();
        let digits_end = rest
            .char_indices()
            .take_while(|(_, c)| c.is_ascii_digit())
            .map(|(i, c)| i + c.len_utf8())
            .last()
            .unwrap_or(0);
        let digits = &rest[..digits_end];
        if digits.is_empty() || digits.len() > 5 {
            return Err(err());
        }
        let number: u32 = digits.parse().map_err(|_| err())?;
        if number == 0 {
            return Err(err());
        }

        let tail = &rest[digits_end..];
        let suffix = match tail.len() {
            0 => None,
            _ => {
                let mut tc = tail.chars();
                let c = tc.next().unwrap();
                if tc.next().is_some() || !c.is_ascii_alphabetic() {
                    return Err(err());
                }
                Some(c.to_ascii_uppercase())
            }
        };

        CourseCode::new(subject, number, suffix)
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    pub fn number(&self) -> u32 {
        self.number
    }

    pub fn suffix(&self) -> Option<char> {
        self.suffix
    }
}

impl fmt::Display for CourseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.subject, self.number)?;
        if let Some(s) = self.suffix {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Course credits stored as tenths, so half-credit values stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Hash)]
pub struct Credits(u32);

impl Credits {
    pub fn from_tenths(tenths: u32) -> Self {
        Credits(tenths)
    }

    /// Parse a non-negative decimal with at most one fractional digit.
    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        let (whole, frac) = match t.split_once('.') {
            Some((w, f)) => (w, Some(f)),
            None => (t, None),
        };
        if whole.is_empty() || !whole.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let mut tenths: u32 = whole.parse::<u32>().ok()?.checked_mul(10)?;
        if let Some(f) = frac {
            if f.len() != 1 || !f.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            tenths += f.parse::<u32>().ok()?;
        }
        Some(Credits(tenths))
    }

    pub fn tenths(&self) -> u32 {
        self.0
    }

    pub fn as_f64(&self) -> f64 {
        f64::from(self.0) / 10.0
    }
}

impl fmt::Display for Credits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

/// How a prerequisite clause names another course.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CourseRef {
    ByCode(CourseCode),
    /// Normalized title: trimmed, internal whitespace collapsed, case
    /// preserved for display and folded only at match time.
    ByTitle(String),
}

impl CourseRef {
    pub fn display_text(&self) -> String {
        match self {
            CourseRef::ByCode(c) => c.to_string(),
            CourseRef::ByTitle(t) => t.clone(),
        }
    }
}

/// Edge kind: a normal prerequisite or a concurrent (corequisite) requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Prerequisite,
    Corequisite,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Prerequisite => "PREREQUISITE",
            EdgeKind::Corequisite => "COREQUISITE",
        }
    }
}

/// AND/OR tree of course references, kept in canonical flattened form:
/// no `All` directly under `All`, no `Any` directly under `Any`, child lists
/// of length >= 2, and `None` only as the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrereqExpr {
    None,
    Ref {
        course: CourseRef,
        kind: EdgeKind,
    },
    All(Vec<PrereqExpr>),
    Any(Vec<PrereqExpr>),
}

impl PrereqExpr {
    /// Rewrite into canonical form, preserving source order of children.
    pub fn canonicalize(self) -> PrereqExpr {
        fn canon(expr: PrereqExpr) -> PrereqExpr {
            match expr {
                PrereqExpr::All(children) => rebuild(children, true),
                PrereqExpr::Any(children) => rebuild(children, false),
                other => other,
            }
        }
        fn rebuild(children: Vec<PrereqExpr>, is_all: bool) -> PrereqExpr {
            let mut flat = Vec::new();
            for child in children {
                match canon(child) {
                    PrereqExpr::None => {}
                    PrereqExpr::All(grand) if is_all => flat.extend(grand),
                    PrereqExpr::Any(grand) if !is_all => flat.extend(grand),
                    other => flat.push(other),
                }
            }
            match flat.len() {
                0 => PrereqExpr::None,
                1 => flat.pop().unwrap(),
                _ if is_all => PrereqExpr::All(flat),
                _ => PrereqExpr::Any(flat),
            }
        }
        canon(self)
    }

    /// True when the tree already satisfies the canonical-form rules.
    pub fn is_canonical(&self) -> bool {
        fn check(expr: &PrereqExpr, is_root: bool) -> bool {
            match expr {
                PrereqExpr::None => is_root,
                PrereqExpr::Ref { .. } => true,
                PrereqExpr::All(children) => {
                    children.len() >= 2
                        && children.iter().all(|c| {
                            !matches!(c, PrereqExpr::All(_)) && check(c, false)
                        })
                }
                PrereqExpr::Any(children) => {
                    children.len() >= 2
                        && children.iter().all(|c| {
                            !matches!(c, PrereqExpr::Any(_)) && check(c, false)
                        })
                }
            }
        }
        check(self, true)
    }

    /// All `Ref` leaves in source order.
    pub fn leaves(&self) -> Vec<(&CourseRef, EdgeKind)> {
        fn walk<'a>(expr: &'a PrereqExpr, out: &mut Vec<(&'a CourseRef, EdgeKind)>) {
            match expr {
                PrereqExpr::None => {}
                PrereqExpr::Ref { course, kind } => out.push((course, *kind)),
                PrereqExpr::All(children) | PrereqExpr::Any(children) => {
                    for c in children {
                        walk(c, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// One catalog entry with the full attribute set.
#[derive(Debug, Clone, PartialEq)]
pub struct Course {
    pub code: CourseCode,
    pub title: String,
    pub category: String,
    pub description: String,
    pub meeting: String,
    pub main_skills: Vec<String>,
    pub credits: Credits,
    pub capacity: u32,
    pub enrollment: u32,
    pub instructor: String,
    pub prereq_expr: PrereqExpr,
}

/// Directed requirement edge: `from` must be taken before (or concurrently
/// with) `to`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrereqEdge {
    pub from: CourseCode,
    pub to: CourseCode,
    pub kind: EdgeKind,
    /// Which top-level conjunct of the clause this leaf came from
    /// (0 when the clause root is not an `All`).
    pub requirement_index: u32,
    /// 1-based position of the leaf's disjunct under the nearest enclosing
    /// `Any`, 0 when the leaf is not under an `Any`.
    pub alternative_group: u32,
}

/// A colliding title: the folded title, the course that owns the index entry,
/// and the later course whose title collided with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateTitle {
    pub title: String,
    pub first: CourseCode,
    pub duplicate: CourseCode,
}

/// Immutable property graph over courses. Adjacency maps cover PREREQUISITE
/// edges only, so direct and transitive queries agree; corequisite pairs are
/// kept in `edges` and never feed cycle or level analysis.
#[derive(Debug, Clone, Default)]
pub struct CurriculumGraph {
    courses: BTreeMap<CourseCode, Course>,
    title_index: BTreeMap<String, CourseCode>,
    edges: Vec<PrereqEdge>,
    forward: BTreeMap<CourseCode, BTreeSet<CourseCode>>,
    reverse: BTreeMap<CourseCode, BTreeSet<CourseCode>>,
    phantoms: BTreeSet<CourseCode>,
    // Construction provenance consumed by validation.
    phantom_refs: BTreeMap<CourseCode, CourseRef>,
    self_refs: Vec<(CourseCode, CourseRef)>,
    synthetic: BTreeSet<CourseCode>,
    duplicate_titles: Vec<DuplicateTitle>,
    line_to_code: BTreeMap<u32, CourseCode>,
}

/// Everything `build_graph` hands over; adjacency is derived here.
pub(crate) struct GraphParts {
    pub courses: BTreeMap<CourseCode, Course>,
    pub title_index: BTreeMap<String, CourseCode>,
    pub edges: Vec<PrereqEdge>,
    pub phantom_refs: BTreeMap<CourseCode, CourseRef>,
    pub self_refs: Vec<(CourseCode, CourseRef)>,
    pub synthetic: BTreeSet<CourseCode>,
    pub duplicate_titles: Vec<DuplicateTitle>,
    pub line_to_code: BTreeMap<u32, CourseCode>,
}

impl CurriculumGraph {
    pub(crate) fn from_parts(parts: GraphParts) -> Self {
        let GraphParts {
            courses,
            title_index,
            mut edges,
            phantom_refs,
            self_refs,
            synthetic,
            duplicate_titles,
            line_to_code,
        } = parts;

        edges.sort();
        edges.dedup_by(|a, b| (&a.from, &a.to, a.kind) == (&b.from, &b.to, b.kind));

        let phantoms: BTreeSet<CourseCode> = phantom_refs.keys().cloned().collect();
        let mut forward: BTreeMap<CourseCode, BTreeSet<CourseCode>> = BTreeMap::new();
        let mut reverse: BTreeMap<CourseCode, BTreeSet<CourseCode>> = BTreeMap::new();
        for code in courses.keys().chain(phantoms.iter()) {
            forward.insert(code.clone(), BTreeSet::new());
            reverse.insert(code.clone(), BTreeSet::new());
        }
        for edge in &edges {
            if edge.kind == EdgeKind::Prerequisite {
                forward
                    .entry(edge.from.clone())
                    .or_default()
                    .insert(edge.to.clone());
                reverse
                    .entry(edge.to.clone())
                    .or_default()
                    .insert(edge.from.clone());
            }
        }

        CurriculumGraph {
            courses,
            title_index,
            edges,
            forward,
            reverse,
            phantoms,
            phantom_refs,
            self_refs,
            synthetic,
            duplicate_titles,
            line_to_code,
        }
    }

    pub fn courses(&self) -> &BTreeMap<CourseCode, Course> {
        &self.courses
    }

    pub fn course(&self, code: &CourseCode) -> Option<&Course> {
        self.courses.get(code)
    }

    pub fn edges(&self) -> &[PrereqEdge] {
        &self.edges
    }

    pub fn phantoms(&self) -> &BTreeSet<CourseCode> {
        &self.phantoms
    }

    pub fn phantom_ref(&self, code: &CourseCode) -> Option<&CourseRef> {
        self.phantom_refs.get(code)
    }

    /// Successors over PREREQUISITE edges, keyed for every node in the graph.
    pub fn forward_adjacency(&self) -> &BTreeMap<CourseCode, BTreeSet<CourseCode>> {
        &self.forward
    }

    /// Prerequisites over PREREQUISITE edges, keyed for every node in the graph.
    pub fn reverse_adjacency(&self) -> &BTreeMap<CourseCode, BTreeSet<CourseCode>> {
        &self.reverse
    }

    /// True when the code names a course or a phantom node.
    pub fn contains(&self, code: &CourseCode) -> bool {
        self.courses.contains_key(code) || self.phantoms.contains(code)
    }

    pub fn is_phantom(&self, code: &CourseCode) -> bool {
        self.phantoms.contains(code)
    }

    /// All node codes (courses plus phantoms) in canonical order.
    pub fn node_codes(&self) -> Vec<CourseCode> {
        let mut all: BTreeSet<CourseCode> = self.courses.keys().cloned().collect();
        all.extend(self.phantoms.iter().cloned());
        all.into_iter().collect()
    }

    pub fn node_count(&self) -> usize {
        self.courses.len() + self.phantoms.len()
    }

    /// Resolve a case-folded title through the index (first occurrence wins).
    pub fn resolve_title(&self, title: &str) -> Option<&CourseCode> {
        self.title_index.get(&fold_title(title))
    }

    /// Every course sharing the given title, for ambiguity reporting.
    pub fn title_candidates(&self, title: &str) -> Vec<CourseCode> {
        let folded = fold_title(title);
        let mut out = Vec::new();
        if let Some(first) = self.title_index.get(&folded) {
            out.push(first.clone());
        }
        for dup in &self.duplicate_titles {
            if dup.title == folded {
                out.push(dup.duplicate.clone());
            }
        }
        out
    }

    pub fn title_index(&self) -> &BTreeMap<String, CourseCode> {
        &self.title_index
    }

    /// Self-references dropped during edge flattening.
    pub fn self_references(&self) -> &[(CourseCode, CourseRef)] {
        &self.self_refs
    }

    /// Codes minted for rows that had no code of their own.
    pub fn synthetic_codes(&self) -> &BTreeSet<CourseCode> {
        &self.synthetic
    }

    pub fn duplicate_titles(&self) -> &[DuplicateTitle] {
        &self.duplicate_titles
    }

    /// The course built from a given input line, if any.
    pub fn code_for_line(&self, line: u32) -> Option<&CourseCode> {
        self.line_to_code.get(&line)
    }

    /// Structural invariant check used by tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (u, succs) in &self.forward {
            for v in succs {
                if !self.reverse.get(v).is_some_and(|s| s.contains(u)) {
                    return Err(format!("adjacency not transposed at {u} -> {v}"));
                }
            }
        }
        for (v, preds) in &self.reverse {
            for u in preds {
                if !self.forward.get(u).is_some_and(|s| s.contains(v)) {
                    return Err(format!("adjacency not transposed at {u} -> {v}"));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if e.from == e.to {
                return Err(format!("self-loop on {}", e.from));
            }
            if !self.contains(&e.from) || !self.contains(&e.to) {
                return Err(format!("edge endpoint missing: {} -> {}", e.from, e.to));
            }
            if !seen.insert((e.from.clone(), e.to.clone(), e.kind)) {
                return Err(format!("duplicate edge {} -> {}", e.from, e.to));
            }
        }
        for code in self.title_index.values() {
            if !self.courses.contains_key(code) {
                return Err(format!("title index points at missing course {code}"));
            }
        }
        for course in self.courses.values() {
            if !self.title_index.contains_key(&fold_title(&course.title)) {
                return Err(format!("title of {} missing from index", course.code));
            }
        }
        Ok(())
    }
}

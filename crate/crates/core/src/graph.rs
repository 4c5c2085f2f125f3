//! Read-only graph queries: precursor/successor lookups, path enumeration
//! between two courses, cycle detection, topological order, and level
//! assignment. COREQUISITE edges never participate in traversal; corequisite
//! pairs are legitimately mutually linked and must not read as cycles.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::model::{CourseCode, CurriculumGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("unknown course: {0}")]
    UnknownCourse(CourseCode),
    #[error("both endpoints name the same course: {0}")]
    SameCourse(CourseCode),
    #[error("graph has prerequisite cycles: {0:?}")]
    CyclicGraph(CycleReport),
}

/// Direction of the connection found by [`paths_between`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathDirection {
    Forward,
    Backward,
    None,
}

impl PathDirection {
    pub fn as_str(&self) -> &'static str {
        match self {
            PathDirection::Forward => "FORWARD",
            PathDirection::Backward => "BACKWARD",
            PathDirection::None => "NONE",
        }
    }
}

/// Simple directed paths between two courses, sorted by (length, sequence).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathResult {
    pub paths: Vec<Vec<CourseCode>>,
    pub direction: PathDirection,
    pub truncated: bool,
}

/// Prerequisite cycles, one representative per strongly connected component,
/// each rotated so its lexicographically smallest course comes first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycleReport {
    pub cycles: Vec<Vec<CourseCode>>,
}

impl CycleReport {
    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

fn require_present(g: &CurriculumGraph, c: &CourseCode) -> Result<(), QueryError> {
    if g.contains(c) {
        Ok(())
    } else {
        Err(QueryError::UnknownCourse(c.clone()))
    }
}

/// Courses that must be taken before `c`: exactly the reverse adjacency row.
pub fn direct_prerequisites(
    g: &CurriculumGraph,
    c: &CourseCode,
) -> Result<BTreeSet<CourseCode>, QueryError> {
    require_present(g, c)?;
    Ok(g.reverse_adjacency().get(c).cloned().unwrap_or_default())
}

/// Courses that list `c` as a prerequisite: the forward adjacency row.
pub fn direct_successors(
    g: &CurriculumGraph,
    c: &CourseCode,
) -> Result<BTreeSet<CourseCode>, QueryError> {
    require_present(g, c)?;
    Ok(g.forward_adjacency().get(c).cloned().unwrap_or_default())
}

fn reachable(
    adjacency: &BTreeMap<CourseCode, BTreeSet<CourseCode>>,
    start: &CourseCode,
    max_depth: Option<u32>,
) -> BTreeSet<CourseCode> {
    let mut seen: BTreeSet<CourseCode> = BTreeSet::new();
    let mut queue: VecDeque<(CourseCode, u32)> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start.clone(), 0));
    while let Some((node, depth)) = queue.pop_front() {
        if max_depth.is_some_and(|limit| depth >= limit) {
            continue;
        }
        if let Some(next) = adjacency.get(&node) {
            for n in next {
                if seen.insert(n.clone()) {
                    queue.push_back((n.clone(), depth + 1));
                }
            }
        }
    }
    seen.remove(start);
    seen
}

/// Everything reachable from `c` over reversed PREREQUISITE edges within
/// `max_depth` (`None` = unbounded), excluding `c` itself.
pub fn transitive_prerequisites(
    g: &CurriculumGraph,
    c: &CourseCode,
    max_depth: Option<u32>,
) -> Result<BTreeSet<CourseCode>, QueryError> {
    require_present(g, c)?;
    Ok(reachable(g.reverse_adjacency(), c, max_depth))
}

/// Everything reachable from `c` over PREREQUISITE edges within `max_depth`.
pub fn transitive_successors(
    g: &CurriculumGraph,
    c: &CourseCode,
    max_depth: Option<u32>,
) -> Result<BTreeSet<CourseCode>, QueryError> {
    require_present(g, c)?;
    Ok(reachable(g.forward_adjacency(), c, max_depth))
}

fn enumerate_paths(
    adjacency: &BTreeMap<CourseCode, BTreeSet<CourseCode>>,
    from: &CourseCode,
    to: &CourseCode,
    max_len: usize,
    cap: usize,
) -> Vec<Vec<CourseCode>> {
    fn dfs(
        adjacency: &BTreeMap<CourseCode, BTreeSet<CourseCode>>,
        node: &CourseCode,
        target: &CourseCode,
        max_len: usize,
        cap: usize,
        path: &mut Vec<CourseCode>,
        on_path: &mut BTreeSet<CourseCode>,
        out: &mut Vec<Vec<CourseCode>>,
    ) {
        if out.len() >= cap {
            return;
        }
        if node == target {
            out.push(path.clone());
            return;
        }
        if path.len() - 1 >= max_len {
            return;
        }
        if let Some(next) = adjacency.get(node) {
            for n in next {
                if out.len() >= cap {
                    return;
                }
                if on_path.insert(n.clone()) {
                    path.push(n.clone());
                    dfs(adjacency, n, target, max_len, cap, path, on_path, out);
                    path.pop();
                    on_path.remove(n);
                }
            }
        }
    }

    let mut out = Vec::new();
    let mut path = vec![from.clone()];
    let mut on_path: BTreeSet<CourseCode> = [from.clone()].into();
    dfs(
        adjacency, from, to, max_len, cap, &mut path, &mut on_path, &mut out,
    );
    out
}

/// Enumerate simple PREREQUISITE paths from `a` to `b`; when none exist, retry
/// from `b` to `a` and report the result as BACKWARD. Paths longer than
/// `max_len` edges are ignored; enumeration stops once `max_paths` paths are
/// found, setting `truncated` when more would have followed.
pub fn paths_between(
    g: &CurriculumGraph,
    a: &CourseCode,
    b: &CourseCode,
    max_len: usize,
    max_paths: usize,
) -> Result<PathResult, QueryError> {
    require_present(g, a)?;
    require_present(g, b)?;
    if a == b {
        return Err(QueryError::SameCourse(a.clone()));
    }

    // Enumerate one past the cap so truncation is knowable.
    let mut collect = |from: &CourseCode, to: &CourseCode| {
        let mut paths = enumerate_paths(g.forward_adjacency(), from, to, max_len, max_paths + 1);
        let truncated = paths.len() > max_paths;
        paths.truncate(max_paths);
        paths.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        (paths, truncated)
    };

    let (paths, truncated) = collect(a, b);
    if !paths.is_empty() {
        return Ok(PathResult {
            paths,
            direction: PathDirection::Forward,
            truncated,
        });
    }
    let (paths, truncated) = collect(b, a);
    if !paths.is_empty() {
        return Ok(PathResult {
            paths,
            direction: PathDirection::Backward,
            truncated,
        });
    }
    Ok(PathResult {
        paths: Vec::new(),
        direction: PathDirection::None,
        truncated: false,
    })
}

/// Node list plus PREREQUISITE-only adjacency in index form. Nodes are in
/// canonical code order, so index order is code order.
fn indexed_prereq_graph(g: &CurriculumGraph) -> (Vec<CourseCode>, Vec<Vec<usize>>) {
    let nodes = g.node_codes();
    let index: BTreeMap<&CourseCode, usize> =
        nodes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let adjacency = nodes
        .iter()
        .map(|c| {
            g.forward_adjacency()
                .get(c)
                .map(|next| next.iter().map(|n| index[n]).collect())
                .unwrap_or_default()
        })
        .collect();
    (nodes, adjacency)
}

/// Strongly connected components via iterative Kosaraju. Components come out
/// in topological order of the condensation (sources first).
fn strongly_connected(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some(&(node, next_child)) = stack.last() {
            if next_child < adjacency[node].len() {
                stack.last_mut().unwrap().1 += 1;
                let child = adjacency[node][next_child];
                if !visited[child] {
                    visited[child] = true;
                    stack.push((child, 0));
                }
            } else {
                order.push(node);
                stack.pop();
            }
        }
    }

    let mut reversed = vec![Vec::new(); n];
    for (u, next) in adjacency.iter().enumerate() {
        for &v in next {
            reversed[v].push(u);
        }
    }

    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &start in order.iter().rev() {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        component[start] = id;
        let mut members = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in &reversed[u] {
                if component[v] == usize::MAX {
                    component[v] = id;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        components.push(members);
    }
    components
}

/// Report prerequisite cycles: one representative cycle per strongly
/// connected component of two or more nodes (plus any surviving self-loop).
pub fn detect_cycles(g: &CurriculumGraph) -> CycleReport {
    let (nodes, adjacency) = indexed_prereq_graph(g);
    let mut cycles = Vec::new();

    for component in strongly_connected(&adjacency) {
        if component.len() == 1 {
            let u = component[0];
            if adjacency[u].contains(&u) {
                cycles.push(vec![nodes[u].clone()]);
            }
            continue;
        }
        let members: BTreeSet<usize> = component.iter().copied().collect();
        // Smallest index = lexicographically smallest code; a shortest cycle
        // through it, found by BFS inside the component, is the canonical
        // representative.
        let start = *members.iter().next().unwrap();
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        let mut dist: BTreeMap<usize, usize> = BTreeMap::new();
        dist.insert(start, 0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if members.contains(&v) && v != start && !dist.contains_key(&v) {
                    dist.insert(v, dist[&u] + 1);
                    parent.insert(v, u);
                    queue.push_back(v);
                }
            }
        }
        let closing = members
            .iter()
            .filter(|&&u| u != start && adjacency[u].contains(&start) && dist.contains_key(&u))
            .min_by_key(|&&u| (dist[&u], u));
        if let Some(&last) = closing {
            let mut rev = vec![last];
            let mut cursor = last;
            while cursor != start {
                cursor = parent[&cursor];
                rev.push(cursor);
            }
            rev.reverse();
            cycles.push(rev.into_iter().map(|i| nodes[i].clone()).collect());
        }
    }

    cycles.sort_by(|a, b| a[0].cmp(&b[0]));
    CycleReport { cycles }
}

/// Deterministic topological order over PREREQUISITE edges; ties broken by
/// (subject, number, suffix), which makes the output unique.
pub fn topological_order(g: &CurriculumGraph) -> Result<Vec<CourseCode>, QueryError> {
    let report = detect_cycles(g);
    if !report.is_empty() {
        return Err(QueryError::CyclicGraph(report));
    }

    let mut indegree: BTreeMap<&CourseCode, usize> = BTreeMap::new();
    for code in g.forward_adjacency().keys() {
        indegree.insert(code, 0);
    }
    for next in g.forward_adjacency().values() {
        for v in next {
            *indegree.get_mut(v).expect("adjacency keys cover nodes") += 1;
        }
    }

    let mut ready: BTreeSet<&CourseCode> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(c, _)| *c)
        .collect();
    let mut out = Vec::with_capacity(indegree.len());
    while let Some(&code) = ready.iter().next() {
        ready.remove(code);
        out.push(code.clone());
        for v in &g.forward_adjacency()[code] {
            let d = indegree.get_mut(v).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.insert(v);
            }
        }
    }
    debug_assert_eq!(out.len(), indegree.len());
    Ok(out)
}

/// Longest-path depth per node over the condensation of the PREREQUISITE
/// subgraph. Total on any graph; equals [`level_assignment`] on a DAG.
pub fn condensation_levels(g: &CurriculumGraph) -> BTreeMap<CourseCode, u32> {
    let (nodes, adjacency) = indexed_prereq_graph(g);
    let components = strongly_connected(&adjacency);
    let mut component_of = vec![0usize; nodes.len()];
    for (id, members) in components.iter().enumerate() {
        for &u in members {
            component_of[u] = id;
        }
    }
    // Components are in topological order, so one forward sweep suffices.
    let mut level = vec![0u32; components.len()];
    for (id, members) in components.iter().enumerate() {
        for &u in members {
            for &v in &adjacency[u] {
                let target = component_of[v];
                if target != id {
                    level[target] = level[target].max(level[id] + 1);
                }
            }
        }
    }
    nodes
        .into_iter()
        .enumerate()
        .map(|(i, code)| (code, level[component_of[i]]))
        .collect()
}

/// Length of the longest PREREQUISITE path ending at each course; sources
/// sit at level 0 and every edge strictly increases the level.
pub fn level_assignment(g: &CurriculumGraph) -> Result<BTreeMap<CourseCode, u32>, QueryError> {
    let report = detect_cycles(g);
    if !report.is_empty() {
        return Err(QueryError::CyclicGraph(report));
    }
    Ok(condensation_levels(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{ingest_bytes, CatalogFormat};

    fn catalog(rows: &[(&str, &str, &str)]) -> CurriculumGraph {
        let mut text = String::from(
            "code,title,category,description,credits,meeting,capacity,enrollment,instructor,main_skills,prerequisites\n",
        );
        for (code, title, prereqs) in rows {
            text.push_str(&format!("{code},{title},,,3.0,,,,,,\"{prereqs}\"\n"));
        }
        let (graph, issues) = ingest_bytes(text.as_bytes(), CatalogFormat::Csv).unwrap();
        assert!(
            issues.is_empty(),
            "test catalog had ingest issues: {issues:?}"
        );
        graph.check_invariants().unwrap();
        graph
    }

    fn code(text: &str) -> CourseCode {
        CourseCode::parse(text).unwrap()
    }

    fn chain() -> CurriculumGraph {
        catalog(&[
            ("CSE 100", "Course A", ""),
            ("CSE 200", "Course B", "CSE 100"),
            ("CSE 300", "Course C", "CSE 200"),
        ])
    }

    #[test]
    fn direct_queries_follow_adjacency() {
        let g = chain();
        assert_eq!(
            direct_prerequisites(&g, &code("CSE 200")).unwrap(),
            [code("CSE 100")].into()
        );
        assert_eq!(
            direct_successors(&g, &code("CSE 200")).unwrap(),
            [code("CSE 300")].into()
        );
        assert!(direct_prerequisites(&g, &code("CSE 100")).unwrap().is_empty());
        assert!(direct_successors(&g, &code("CSE 300")).unwrap().is_empty());
    }

    #[test]
    fn unknown_course_is_rejected() {
        let g = chain();
        let missing = code("ZZZ 999");
        assert_eq!(
            direct_prerequisites(&g, &missing),
            Err(QueryError::UnknownCourse(missing.clone()))
        );
        assert_eq!(
            transitive_successors(&g, &missing, None),
            Err(QueryError::UnknownCourse(missing.clone()))
        );
        assert_eq!(
            paths_between(&g, &missing, &code("CSE 100"), 16, 100),
            Err(QueryError::UnknownCourse(missing))
        );
    }

    #[test]
    fn duality_of_direct_queries() {
        let g = catalog(&[
            ("CSE 100", "Course A", ""),
            ("CSE 200", "Course B", "CSE 100"),
            ("CSE 300", "Course C", "CSE 100 and CSE 200"),
            ("CSE 400", "Course D", "CSE 200 or CSE 300"),
        ]);
        for u in g.node_codes() {
            for v in g.node_codes() {
                let u_pre_of_v = direct_prerequisites(&g, &v).unwrap().contains(&u);
                let v_succ_of_u = direct_successors(&g, &u).unwrap().contains(&v);
                assert_eq!(u_pre_of_v, v_succ_of_u, "duality broke at {u} / {v}");
            }
        }
    }

    #[test]
    fn transitive_closure_on_chain() {
        let g = chain();
        assert_eq!(
            transitive_prerequisites(&g, &code("CSE 300"), None).unwrap(),
            [code("CSE 100"), code("CSE 200")].into()
        );
        assert_eq!(
            transitive_prerequisites(&g, &code("CSE 300"), Some(1)).unwrap(),
            [code("CSE 200")].into()
        );
        assert_eq!(
            transitive_successors(&g, &code("CSE 100"), None).unwrap(),
            [code("CSE 200"), code("CSE 300")].into()
        );
        assert!(transitive_successors(&g, &code("CSE 300"), None)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn corequisite_edges_stay_out_of_traversal() {
        let g = catalog(&[
            ("CSE 174", "Course A", ""),
            ("CSE 174L", "Course A Lab", "CSE 174 (concurrent)"),
        ]);
        assert_eq!(g.edges().len(), 1);
        assert!(direct_prerequisites(&g, &code("CSE 174L")).unwrap().is_empty());
        assert!(transitive_successors(&g, &code("CSE 174"), None)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn transitive_terminates_on_cycles() {
        let g = catalog(&[
            ("CSE 101", "Course A", "CSE 103"),
            ("CSE 102", "Course B", "CSE 101"),
            ("CSE 103", "Course C", "CSE 102"),
        ]);
        let pre = transitive_prerequisites(&g, &code("CSE 101"), None).unwrap();
        assert_eq!(pre, [code("CSE 102"), code("CSE 103")].into());
    }

    #[test]
    fn paths_forward_backward_none() {
        let g = chain();
        let forward = paths_between(&g, &code("CSE 100"), &code("CSE 300"), 16, 100).unwrap();
        assert_eq!(forward.direction, PathDirection::Forward);
        assert_eq!(
            forward.paths,
            vec![vec![code("CSE 100"), code("CSE 200"), code("CSE 300")]]
        );
        assert!(!forward.truncated);

        let backward = paths_between(&g, &code("CSE 300"), &code("CSE 100"), 16, 100).unwrap();
        assert_eq!(backward.direction, PathDirection::Backward);
        assert_eq!(backward.paths, forward.paths);

        let g2 = catalog(&[("CSE 100", "Course A", ""), ("CSE 200", "Course B", "")]);
        let none = paths_between(&g2, &code("CSE 100"), &code("CSE 200"), 16, 100).unwrap();
        assert_eq!(none.direction, PathDirection::None);
        assert!(none.paths.is_empty());
    }

    #[test]
    fn paths_same_course_is_an_error() {
        let g = chain();
        assert_eq!(
            paths_between(&g, &code("CSE 100"), &code("CSE 100"), 16, 100),
            Err(QueryError::SameCourse(code("CSE 100")))
        );
    }

    #[test]
    fn paths_respect_limits() {
        // Diamond: two paths A->D.
        let g = catalog(&[
            ("CSE 100", "Course A", ""),
            ("CSE 200", "Course B", "CSE 100"),
            ("CSE 300", "Course C", "CSE 100"),
            ("CSE 400", "Course D", "CSE 200 and CSE 300"),
        ]);
        let all = paths_between(&g, &code("CSE 100"), &code("CSE 400"), 16, 100).unwrap();
        assert_eq!(all.paths.len(), 2);
        assert!(!all.truncated);

        let capped = paths_between(&g, &code("CSE 100"), &code("CSE 400"), 16, 1).unwrap();
        assert_eq!(capped.paths.len(), 1);
        assert!(capped.truncated);

        // Direct edge A->D is absent, so max_len 1 finds nothing; the
        // backward retry finds nothing either.
        let short = paths_between(&g, &code("CSE 100"), &code("CSE 400"), 1, 100).unwrap();
        assert_eq!(short.direction, PathDirection::None);
    }

    #[test]
    fn paths_sorted_by_length_then_sequence() {
        let g = catalog(&[
            ("CSE 100", "Course A", ""),
            ("CSE 200", "Course B", "CSE 100"),
            ("CSE 300", "Course C", "CSE 100"),
            ("CSE 400", "Course D", "CSE 100 and CSE 200 and CSE 300"),
        ]);
        let res = paths_between(&g, &code("CSE 100"), &code("CSE 400"), 16, 100).unwrap();
        assert_eq!(
            res.paths,
            vec![
                vec![code("CSE 100"), code("CSE 400")],
                vec![code("CSE 100"), code("CSE 200"), code("CSE 400")],
                vec![code("CSE 100"), code("CSE 300"), code("CSE 400")],
            ]
        );
    }

    #[test]
    fn acyclic_graph_has_empty_cycle_report() {
        assert!(detect_cycles(&chain()).is_empty());
        let single = catalog(&[("CSE 100", "Course A", "")]);
        assert!(detect_cycles(&single).is_empty());
    }

    #[test]
    fn planted_three_cycle_is_reported_once_canonically() {
        let g = catalog(&[
            ("CSE 101", "Course A", "CSE 103"),
            ("CSE 102", "Course B", "CSE 101"),
            ("CSE 103", "Course C", "CSE 102"),
        ]);
        let report = detect_cycles(&g);
        assert_eq!(
            report.cycles,
            vec![vec![code("CSE 101"), code("CSE 102"), code("CSE 103")]]
        );
        // Consecutive pairs plus the wrap-around are real edges.
        for cycle in &report.cycles {
            for i in 0..cycle.len() {
                let from = &cycle[i];
                let to = &cycle[(i + 1) % cycle.len()];
                assert!(g.forward_adjacency()[from].contains(to));
            }
        }
    }

    #[test]
    fn disjoint_cycles_each_reported() {
        let g = catalog(&[
            ("CSE 101", "Course A", "CSE 102"),
            ("CSE 102", "Course B", "CSE 101"),
            ("MTH 201", "Course C", "MTH 202"),
            ("MTH 202", "Course D", "MTH 201"),
            ("PHY 301", "Course E", ""),
        ]);
        let report = detect_cycles(&g);
        assert_eq!(report.cycles.len(), 2);
        assert_eq!(report.cycles[0][0], code("CSE 101"));
        assert_eq!(report.cycles[1][0], code("MTH 201"));
    }

    #[test]
    fn topological_order_is_deterministic_and_valid() {
        let g = chain();
        assert_eq!(
            topological_order(&g).unwrap(),
            vec![code("CSE 100"), code("CSE 200"), code("CSE 300")]
        );

        let ties = catalog(&[("CSE 271", "Course B", ""), ("CSE 174", "Course A", "")]);
        assert_eq!(
            topological_order(&ties).unwrap(),
            vec![code("CSE 174"), code("CSE 271")]
        );
    }

    #[test]
    fn topological_order_rejects_cycles() {
        let g = catalog(&[
            ("CSE 101", "Course A", "CSE 102"),
            ("CSE 102", "Course B", "CSE 101"),
        ]);
        match topological_order(&g) {
            Err(QueryError::CyclicGraph(report)) => assert_eq!(report.cycles.len(), 1),
            other => panic!("expected CyclicGraph, got {other:?}"),
        }
    }

    #[test]
    fn levels_follow_longest_paths() {
        let single = catalog(&[("CSE 100", "Course A", "")]);
        assert_eq!(level_assignment(&single).unwrap()[&code("CSE 100")], 0);

        let g = chain();
        let levels = level_assignment(&g).unwrap();
        assert_eq!(levels[&code("CSE 100")], 0);
        assert_eq!(levels[&code("CSE 200")], 1);
        assert_eq!(levels[&code("CSE 300")], 2);

        let diamond = catalog(&[
            ("CSE 100", "Course A", ""),
            ("CSE 200", "Course B", "CSE 100"),
            ("CSE 300", "Course C", "CSE 100"),
            ("CSE 400", "Course D", "CSE 200 and CSE 300"),
        ]);
        let levels = level_assignment(&diamond).unwrap();
        assert_eq!(levels[&code("CSE 100")], 0);
        assert_eq!(levels[&code("CSE 200")], 1);
        assert_eq!(levels[&code("CSE 300")], 1);
        assert_eq!(levels[&code("CSE 400")], 2);

        // Every edge strictly increases the level.
        for (u, next) in diamond.forward_adjacency() {
            for v in next {
                assert!(levels[u] < levels[v]);
            }
        }
    }

    #[test]
    fn level_assignment_rejects_cycles_but_condensation_is_total() {
        let g = catalog(&[
            ("CSE 101", "Course A", "CSE 102"),
            ("CSE 102", "Course B", "CSE 101"),
            ("CSE 103", "Course C", "CSE 102"),
        ]);
        assert!(matches!(
            level_assignment(&g),
            Err(QueryError::CyclicGraph(_))
        ));
        let levels = condensation_levels(&g);
        assert_eq!(levels[&code("CSE 101")], 0);
        assert_eq!(levels[&code("CSE 102")], 0);
        assert_eq!(levels[&code("CSE 103")], 1);
    }

    #[test]
    fn phantoms_participate_in_traversal() {
        let g = catalog(&[
            ("CSE 200", "Course B", "ZZZ 999"),
            ("CSE 300", "Course C", "CSE 200"),
        ]);
        let phantom = code("ZZZ 999");
        assert!(g.is_phantom(&phantom));
        assert_eq!(
            transitive_successors(&g, &phantom, None).unwrap(),
            [code("CSE 200"), code("CSE 300")].into()
        );
        let res = paths_between(&g, &phantom, &code("CSE 300"), 16, 100).unwrap();
        assert_eq!(res.direction, PathDirection::Forward);
        assert_eq!(res.paths.len(), 1);
    }
}

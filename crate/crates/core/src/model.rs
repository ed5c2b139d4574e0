//! Tasks, schedules, voter preferences and constraints, plus the line-oriented
//! text formats they are read from.
//!
//! Slots are 1-based: the task in slot `t` runs over `[t-1, t]` and has
//! completion time `t`. A window `(r, d)` admits completion times `r < C <= d`.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::assignment::max_bipartite_matching;
use crate::error::{Error, ParseError, ParseErrorKind, Result};

/// A task identifier in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskId(usize);

impl TaskId {
    /// # Panics
    /// If `id` is zero.
    pub fn new(id: usize) -> Self {
        assert!(id >= 1, "task ids start at 1");
        Self(id)
    }

    pub fn from_index(index: usize) -> Self {
        Self(index + 1)
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Zero-based position of this task in per-task tables.
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A permutation of the tasks `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    order: Vec<TaskId>,
    // completion[j] is the slot of task j+1
    completion: Vec<usize>,
}

impl Schedule {
    /// Builds a schedule from task ids listed in execution order.
    pub fn new(ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let order: Vec<usize> = ids.into_iter().collect();
        let n = order.len();
        let mut completion = vec![0usize; n];
        for (pos, &id) in order.iter().enumerate() {
            if id == 0 || id > n {
                return Err(Error::InvalidSchedule(format!("task {id} outside 1..={n}")));
            }
            if completion[id - 1] != 0 {
                return Err(Error::InvalidSchedule(format!("task {id} appears twice")));
            }
            completion[id - 1] = pos + 1;
        }
        Ok(Self {
            order: order.into_iter().map(TaskId).collect(),
            completion,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (1..=n).map(TaskId).collect(),
            completion: (1..=n).collect(),
        }
    }

    /// Inverse construction: `slots[j]` is the completion time of task `j+1`.
    pub fn from_completion_times(slots: &[usize]) -> Result<Self> {
        let n = slots.len();
        let mut order = vec![0usize; n];
        for (j, &t) in slots.iter().enumerate() {
            if t == 0 || t > n || order[t - 1] != 0 {
                return Err(Error::InvalidSchedule(format!(
                    "slot {t} of task {} is out of range or taken",
                    j + 1
                )));
            }
            order[t - 1] = j + 1;
        }
        Self::new(order)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[TaskId] {
        &self.order
    }

    pub fn ids(&self) -> Vec<usize> {
        self.order.iter().map(|t| t.get()).collect()
    }

    /// Completion time (= 1-based slot) of `task`.
    pub fn completion(&self, task: TaskId) -> usize {
        self.completion[task.index()]
    }

    pub fn completion_times(&self) -> &[usize] {
        &self.completion
    }

    /// Task occupying the 1-based `slot`.
    pub fn task_at(&self, slot: usize) -> TaskId {
        self.order[slot - 1]
    }

    /// The mirror schedule: the task at slot `t` moves to slot `n + 1 - t`.
    pub fn reversed(&self) -> Self {
        let order: Vec<TaskId> = self.order.iter().rev().copied().collect();
        let n = self.len();
        let completion = self.completion.iter().map(|&c| n + 1 - c).collect();
        Self { order, completion }
    }

    pub fn precedes(&self, a: TaskId, b: TaskId) -> bool {
        self.completion(a) < self.completion(b)
    }

    /// Exchanges the tasks held by two slots.
    pub fn swap_slots(&mut self, s: usize, t: usize) {
        let (a, b) = (self.order[s - 1], self.order[t - 1]);
        self.order.swap(s - 1, t - 1);
        self.completion[a.index()] = t;
        self.completion[b.index()] = s;
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Schedule {
    type Err = Error;

    /// Whitespace- or comma-separated task ids.
    fn from_str(s: &str) -> Result<Self> {
        let ids = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidSchedule(format!("`{t}` is not a task id")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ids)
    }
}

/// A `(release, due)` pair: completion times `release < C <= due` are inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub release: usize,
    pub due: usize,
}

impl Window {
    pub const fn new(release: usize, due: usize) -> Self {
        Self { release, due }
    }

    pub fn is_well_formed(&self, n: usize) -> bool {
        self.release < self.due && self.due <= n
    }

    pub fn contains(&self, completion: usize) -> bool {
        self.release < completion && completion <= self.due
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.release, self.due)
    }
}

/// True iff some schedule puts every task inside its window.
///
/// Runs a maximum bipartite matching between tasks and slots; task `j` may use
/// slot `t` when `r_j <= t - 1` and `t <= d_j`.
pub fn validate_interval_preference(windows: &[Window]) -> bool {
    let n = windows.len();
    max_bipartite_matching(n, n, |j, t| windows[j].contains(t + 1)) == n
}

/// One voter's windows, indexed by task.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalPreference {
    windows: Vec<Window>,
}

impl IntervalPreference {
    /// Checks bounds and that a feasible witness schedule exists.
    pub fn new(windows: Vec<Window>) -> Result<Self> {
        let n = windows.len();
        if let Some((j, w)) = windows
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_well_formed(n))
        {
            return Err(Error::InvalidWindows(format!(
                "window {w} of task {} violates 0 <= r < d <= {n}",
                j + 1
            )));
        }
        if !validate_interval_preference(&windows) {
            return Err(Error::InvalidWindows(
                "no schedule fits every window of this preference".into(),
            ));
        }
        Ok(Self { windows })
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn window(&self, task: TaskId) -> Window {
        self.windows[task.index()]
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }
}

/// How a preferred permutation is turned into per-task windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    /// `(C-1, C)`: total deviation under the distance criterion.
    Deviation,
    /// `(0, C)`: total tardiness under the distance criterion.
    Tardiness,
    /// `(C-1, n)`: total earliness under the distance criterion.
    Earliness,
    /// `(0, C)`: number of late tasks under the binary criterion.
    LateTasks,
    /// `(C-1, C)`: tasks off their preferred slot under the binary criterion.
    ExactPosition,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 5] = [
        EncodingKind::Deviation,
        EncodingKind::Tardiness,
        EncodingKind::Earliness,
        EncodingKind::LateTasks,
        EncodingKind::ExactPosition,
    ];

    /// Window derived from a preferred completion time `c` among `n` tasks.
    pub fn window(self, c: usize, n: usize) -> Window {
        match self {
            EncodingKind::Deviation | EncodingKind::ExactPosition => Window::new(c - 1, c),
            EncodingKind::Tardiness | EncodingKind::LateTasks => Window::new(0, c),
            EncodingKind::Earliness => Window::new(c - 1, n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EncodingKind::Deviation => "deviation",
            EncodingKind::Tardiness => "tardiness",
            EncodingKind::Earliness => "earliness",
            EncodingKind::LateTasks => "late",
            EncodingKind::ExactPosition => "exactpos",
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncodingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "deviation" | "dev" => Ok(Self::Deviation),
            "tardiness" => Ok(Self::Tardiness),
            "earliness" => Ok(Self::Earliness),
            "late" | "late_tasks" => Ok(Self::LateTasks),
            "exactpos" | "exact_position" => Ok(Self::ExactPosition),
            other => Err(format!("unknown encoding `{other}`")),
        }
    }
}

/// Converts a preferred permutation into windows under `encoding`.
pub fn order_to_interval(pref: &Schedule, encoding: EncodingKind) -> IntervalPreference {
    let n = pref.len();
    IntervalPreference {
        windows: pref
            .completion_times()
            .iter()
            .map(|&c| encoding.window(c, n))
            .collect(),
    }
}

/// A preference together with the number of voters who hold it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weighted<T> {
    pub preference: T,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ballots {
    Order(Vec<Weighted<Schedule>>),
    Interval(Vec<Weighted<IntervalPreference>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    Order,
    Interval,
}

impl fmt::Display for ProfileMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileMode::Order => "order",
            ProfileMode::Interval => "interval",
        })
    }
}

/// The voters' input. Identical voters are stored once with a multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    n: usize,
    voters: u64,
    ballots: Ballots,
}

impl PreferenceProfile {
    pub fn from_orders(entries: Vec<(Schedule, u64)>) -> Result<Self> {
        let n = Self::check_entries(entries.iter().map(|(s, m)| (s.len(), *m)))?;
        let voters = entries.iter().map(|(_, m)| m).sum();
        let ballots = Ballots::Order(
            entries
                .into_iter()
                .map(|(preference, multiplicity)| Weighted {
                    preference,
                    multiplicity,
                })
                .collect(),
        );
        Ok(Self { n, voters, ballots })
    }

    pub fn from_intervals(entries: Vec<(IntervalPreference, u64)>) -> Result<Self> {
        let n = Self::check_entries(entries.iter().map(|(p, m)| (p.len(), *m)))?;
        let voters = entries.iter().map(|(_, m)| m).sum();
        let ballots = Ballots::Interval(
            entries
                .into_iter()
                .map(|(preference, multiplicity)| Weighted {
                    preference,
                    multiplicity,
                })
                .collect(),
        );
        Ok(Self { n, voters, ballots })
    }

    /// One voter per listed permutation.
    pub fn from_permutations<I, P>(prefs: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: IntoIterator<Item = usize>,
    {
        let entries = prefs
            .into_iter()
            .map(|p| Schedule::new(p).map(|s| (s, 1)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_orders(entries)
    }

    fn check_entries(mut sizes: impl Iterator<Item = (usize, u64)>) -> Result<usize> {
        let (n, m) = sizes
            .next()
            .ok_or_else(|| Error::InvalidSchedule("a profile needs at least one voter".into()))?;
        if n == 0 {
            return Err(Error::InvalidSchedule(
                "a profile needs at least one task".into(),
            ));
        }
        if m == 0 {
            return Err(Error::InvalidSchedule(
                "multiplicities must be positive".into(),
            ));
        }
        for (len, m) in sizes {
            if len != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: len,
                });
            }
            if m == 0 {
                return Err(Error::InvalidSchedule(
                    "multiplicities must be positive".into(),
                ));
            }
        }
        Ok(n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total voter count (sum of multiplicities).
    pub fn voters(&self) -> u64 {
        self.voters
    }

    pub fn ballots(&self) -> &Ballots {
        &self.ballots
    }

    pub fn mode(&self) -> ProfileMode {
        match self.ballots {
            Ballots::Order(_) => ProfileMode::Order,
            Ballots::Interval(_) => ProfileMode::Interval,
        }
    }

    /// The distinct permutations of an order-mode profile.
    pub fn orders(&self) -> Result<&[Weighted<Schedule>]> {
        match &self.ballots {
            Ballots::Order(entries) => Ok(entries),
            Ballots::Interval(_) => Err(Error::ModeMismatch(
                "this operation needs an order-mode profile".into(),
            )),
        }
    }

    /// Per-voter windows. Order profiles need an encoding; interval profiles
    /// must not be given one.
    pub fn interval_view(
        &self,
        encoding: Option<EncodingKind>,
    ) -> Result<Cow<'_, [Weighted<IntervalPreference>]>> {
        match (&self.ballots, encoding) {
            (Ballots::Order(entries), Some(enc)) => Ok(Cow::Owned(
                entries
                    .iter()
                    .map(|w| Weighted {
                        preference: order_to_interval(&w.preference, enc),
                        multiplicity: w.multiplicity,
                    })
                    .collect(),
            )),
            (Ballots::Interval(entries), None) => Ok(Cow::Borrowed(entries)),
            (Ballots::Order(_), None) => Err(Error::ModeMismatch(
                "order-mode profiles need an encoding".into(),
            )),
            (Ballots::Interval(_), Some(enc)) => Err(Error::ModeMismatch(format!(
                "encoding `{enc}` does not apply to an interval-mode profile"
            ))),
        }
    }

    /// Every preference reversed in time (order mode only).
    pub fn reversed(&self) -> Result<Self> {
        let entries = self
            .orders()?
            .iter()
            .map(|w| (w.preference.reversed(), w.multiplicity))
            .collect();
        Self::from_orders(entries)
    }

    /// Voters one by one, multiplicities expanded in listing order.
    pub fn expanded_orders(&self) -> Result<impl Iterator<Item = &Schedule>> {
        Ok(self
            .orders()?
            .iter()
            .flat_map(|w| std::iter::repeat_n(&w.preference, w.multiplicity as usize)))
    }
}

impl fmt::Display for PreferenceProfile {
    /// Writes the profile in the text format accepted by [`parse_profile`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "profile {}", self.mode())?;
        writeln!(f, "tasks {}", self.n)?;
        writeln!(f, "voters {}", self.voters)?;
        match &self.ballots {
            Ballots::Order(entries) => {
                for w in entries {
                    writeln!(f, "pref {} : {}", w.multiplicity, w.preference)?;
                }
            }
            Ballots::Interval(entries) => {
                for w in entries {
                    write!(f, "pref {} :", w.multiplicity)?;
                    for win in w.preference.windows() {
                        write!(f, " {win}")?;
                    }
                    writeln!(f)?;
                }
            }
        }
        Ok(())
    }
}

/// Global `(release, deadline)` restrictions on the output schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeWindows {
    windows: Vec<Window>,
}

impl TimeWindows {
    pub fn new(windows: Vec<Window>) -> Result<Self> {
        let n = windows.len();
        if let Some((j, w)) = windows
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_well_formed(n))
        {
            return Err(Error::InvalidWindows(format!(
                "window {w} of task {} violates 0 <= r < d <= {n}",
                j + 1
            )));
        }
        Ok(Self { windows })
    }

    pub fn unconstrained(n: usize) -> Self {
        Self {
            windows: vec![Window::new(0, n); n],
        }
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn window(&self, task: TaskId) -> Window {
        self.windows[task.index()]
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    /// Whether `task` may complete at `slot`.
    pub fn allows(&self, task: TaskId, slot: usize) -> bool {
        self.window(task).contains(slot)
    }

    pub fn is_satisfied_by(&self, schedule: &Schedule) -> bool {
        schedule
            .order()
            .iter()
            .all(|&t| self.allows(t, schedule.completion(t)))
    }
}

/// An acyclic set of "a completes before b" constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceGraph {
    n: usize,
    edges: BTreeSet<(TaskId, TaskId)>,
    preds: Vec<Vec<TaskId>>,
    succs: Vec<Vec<TaskId>>,
}

impl PrecedenceGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidGraph(format!(
                    "edge {a} -> {b} outside 1..={n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on task {a}")));
            }
            set.insert((TaskId(a), TaskId(b)));
        }
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        for &(a, b) in &set {
            preds[b.index()].push(a);
            succs[a.index()].push(b);
        }
        let graph = Self {
            n,
            edges: set,
            preds,
            succs,
        };
        if graph.topological_order().is_none() {
            return Err(Error::InvalidGraph(
                "precedence graph contains a cycle".into(),
            ));
        }
        Ok(graph)
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
            preds: vec![Vec::new(); n],
            succs: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (TaskId, TaskId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, a: TaskId, b: TaskId) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn predecessors(&self, task: TaskId) -> &[TaskId] {
        &self.preds[task.index()]
    }

    pub fn successors(&self, task: TaskId) -> &[TaskId] {
        &self.succs[task.index()]
    }

    /// Kahn's algorithm, smallest ready id first; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<TaskId>> {
        let mut indegree: Vec<usize> = self.preds.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..self.n).filter(|&j| indegree[j] == 0).collect();
        let mut out = Vec::with_capacity(self.n);
        while let Some(j) = ready.pop_first() {
            out.push(TaskId::from_index(j));
            for s in &self.succs[j] {
                indegree[s.index()] -= 1;
                if indegree[s.index()] == 0 {
                    ready.insert(s.index());
                }
            }
        }
        (out.len() == self.n).then_some(out)
    }

    pub fn is_satisfied_by(&self, schedule: &Schedule) -> bool {
        self.edges.iter().all(|&(a, b)| schedule.precedes(a, b))
    }

    /// The same graph with `(a, b)` added, if that keeps it acyclic.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<Self> {
        Self::new(
            self.n,
            self.edges
                .iter()
                .map(|(x, y)| (x.get(), y.get()))
                .chain(std::iter::once((a, b))),
        )
    }
}

impl fmt::Display for PrecedenceGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.edges {
            writeln!(f, "{a} -> {b}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

/// Non-blank lines with `#` comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_number<T: FromStr>(token: &str, line: usize, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::syntax(line, format!("expected {what}, found `{token}`")))
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
    last_line: usize,
) -> Result<(usize, &'a str), ParseError> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(last_line, format!("missing `{keyword}` line")))?;
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(keyword) {
        return Err(ParseError::syntax(no, format!("expected `{keyword} ...`")));
    }
    let value = tokens
        .next()
        .ok_or_else(|| ParseError::syntax(no, format!("`{keyword}` needs a value")))?;
    if tokens.next().is_some() {
        return Err(ParseError::syntax(
            no,
            format!("trailing tokens after `{keyword}`"),
        ));
    }
    Ok((no, value))
}

fn parse_order_line(rest: &str, n: usize, line: usize) -> Result<Schedule, ParseError> {
    if rest.contains('(') {
        return Err(ParseError::new(line, ParseErrorKind::MixedModes("order")));
    }
    let ids = rest
        .split_whitespace()
        .map(|t| parse_number::<usize>(t, line, "a task id"))
        .collect::<Result<Vec<_>, _>>()?;
    if ids.len() != n {
        return Err(ParseError::new(
            line,
            ParseErrorKind::TaskCountMismatch {
                expected: n,
                found: ids.len(),
            },
        ));
    }
    let mut seen = vec![false; n];
    for &id in &ids {
        if id == 0 || id > n {
            return Err(ParseError::new(
                line,
                ParseErrorKind::TaskOutOfRange { task: id, n },
            ));
        }
        if std::mem::replace(&mut seen[id - 1], true) {
            return Err(ParseError::new(line, ParseErrorKind::DuplicateTask(id)));
        }
    }
    Ok(Schedule::new(ids).expect("validated permutation"))
}

fn parse_interval_line(
    rest: &str,
    n: usize,
    line: usize,
) -> Result<IntervalPreference, ParseError> {
    let mut s = rest.trim();
    if !s.is_empty() && !s.starts_with('(') {
        return Err(ParseError::new(
            line,
            ParseErrorKind::MixedModes("interval"),
        ));
    }
    let mut windows = Vec::with_capacity(n);
    while !s.is_empty() {
        let inner = s
            .strip_prefix('(')
            .ok_or_else(|| ParseError::syntax(line, "expected `(`"))?;
        let close = inner
            .find(')')
            .ok_or_else(|| ParseError::syntax(line, "unclosed `(`"))?;
        let (r, d) = inner[..close]
            .split_once(',')
            .ok_or_else(|| ParseError::syntax(line, "expected `(<release>,<due>)`"))?;
        let release = parse_number::<usize>(r.trim(), line, "a release date")?;
        let due = parse_number::<usize>(d.trim(), line, "a due date")?;
        windows.push(Window::new(release, due));
        s = inner[close + 1..].trim_start();
    }
    if windows.len() != n {
        return Err(ParseError::new(
            line,
            ParseErrorKind::TaskCountMismatch {
                expected: n,
                found: windows.len(),
            },
        ));
    }
    for (j, w) in windows.iter().enumerate() {
        if !w.is_well_formed(n) {
            return Err(ParseError::new(
                line,
                ParseErrorKind::BadWindow {
                    task: j + 1,
                    release: w.release,
                    due: w.due,
                    n,
                },
            ));
        }
    }
    if !validate_interval_preference(&windows) {
        return Err(ParseError::new(line, ParseErrorKind::InfeasibleWindows));
    }
    Ok(IntervalPreference { windows })
}

/// Parses the profile text format:
///
/// ```text
/// profile order            # or `profile interval`
/// tasks 3
/// voters 3
/// pref 2 : 1 2 3           # order mode: a permutation
/// pref 1 : 3 1 2
/// ```
///
/// In interval mode each `pref` line lists `(r,d)` pairs, pair `k` belonging
/// to task `k`. Multiplicities must add up to the declared voter count.
pub fn parse_profile(text: &str) -> Result<PreferenceProfile> {
    let mut lines = content_lines(text);
    let (no, mode) = expect_header(&mut lines, "profile", 1)?;
    let mode = match mode {
        "order" => ProfileMode::Order,
        "interval" => ProfileMode::Interval,
        other => {
            return Err(ParseError::syntax(no, format!("unknown profile mode `{other}`")).into())
        }
    };
    let (no, n) = expect_header(&mut lines, "tasks", no)?;
    let n: usize = parse_number(n, no, "a task count")?;
    if n == 0 {
        return Err(ParseError::syntax(no, "a profile needs at least one task").into());
    }
    let (mut last, v) = expect_header(&mut lines, "voters", no)?;
    let declared: u64 = parse_number(v, last, "a voter count")?;

    let mut orders = Vec::new();
    let mut intervals = Vec::new();
    let mut total = 0u64;
    for (no, line) in lines {
        last = no;
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| ParseError::syntax(no, "expected `pref <multiplicity> : ...`"))?;
        let mut head_tokens = head.split_whitespace();
        if head_tokens.next() != Some("pref") {
            return Err(ParseError::syntax(no, "expected `pref <multiplicity> : ...`").into());
        }
        let m: u64 = parse_number(
            head_tokens
                .next()
                .ok_or_else(|| ParseError::syntax(no, "missing multiplicity"))?,
            no,
            "a multiplicity",
        )?;
        if m == 0 || head_tokens.next().is_some() {
            return Err(ParseError::syntax(no, "multiplicity must be one positive integer").into());
        }
        total += m;
        match mode {
            ProfileMode::Order => orders.push((parse_order_line(rest, n, no)?, m)),
            ProfileMode::Interval => intervals.push((parse_interval_line(rest, n, no)?, m)),
        }
    }
    if total != declared || total == 0 {
        return Err(ParseError::new(
            last,
            ParseErrorKind::VoterCountMismatch {
                declared,
                found: total,
            },
        )
        .into());
    }
    match mode {
        ProfileMode::Order => PreferenceProfile::from_orders(orders),
        ProfileMode::Interval => PreferenceProfile::from_intervals(intervals),
    }
}

/// Parses one `a -> b` edge per line.
pub fn parse_precedence(text: &str, n: usize) -> Result<PrecedenceGraph> {
    let mut edges = Vec::new();
    for (no, line) in content_lines(text) {
        let (a, b) = line
            .split_once("->")
            .ok_or_else(|| ParseError::syntax(no, "expected `<a> -> <b>`"))?;
        let a: usize = parse_number(a.trim(), no, "a task id")?;
        let b: usize = parse_number(b.trim(), no, "a task id")?;
        for t in [a, b] {
            if t == 0 || t > n {
                return Err(
                    ParseError::new(no, ParseErrorKind::TaskOutOfRange { task: t, n }).into(),
                );
            }
        }
        if a == b {
            return Err(ParseError::syntax(no, format!("self-loop on task {a}")).into());
        }
        edges.push((a, b));
    }
    PrecedenceGraph::new(n, edges).map_err(|e| match e {
        Error::InvalidGraph(_) => ParseError::new(0, ParseErrorKind::Cycle).into(),
        other => other,
    })
}

/// Parses `task <j> : <r> <d>` lines; unlisted tasks get `(0, n)`.
pub fn parse_time_windows(text: &str, n: usize) -> Result<TimeWindows> {
    let mut windows = vec![Window::new(0, n); n];
    let mut seen = vec![false; n];
    for (no, line) in content_lines(text) {
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| ParseError::syntax(no, "expected `task <j> : <r> <d>`"))?;
        let mut head_tokens = head.split_whitespace();
        if head_tokens.next() != Some("task") {
            return Err(ParseError::syntax(no, "expected `task <j> : <r> <d>`").into());
        }
        let j: usize = parse_number(
            head_tokens
                .next()
                .ok_or_else(|| ParseError::syntax(no, "missing task id"))?,
            no,
            "a task id",
        )?;
        if j == 0 || j > n {
            return Err(ParseError::new(no, ParseErrorKind::TaskOutOfRange { task: j, n }).into());
        }
        let values: Vec<&str> = rest.split_whitespace().collect();
        let [r, d] = values[..] else {
            return Err(ParseError::syntax(no, "expected `<release> <deadline>`").into());
        };
        let w = Window::new(
            parse_number(r, no, "a release date")?,
            parse_number(d, no, "a deadline")?,
        );
        if !w.is_well_formed(n) {
            return Err(ParseError::new(
                no,
                ParseErrorKind::BadWindow {
                    task: j,
                    release: w.release,
                    due: w.due,
                    n,
                },
            )
            .into());
        }
        if std::mem::replace(&mut seen[j - 1], true) {
            return Err(ParseError::new(no, ParseErrorKind::DuplicateTask(j)).into());
        }
        windows[j - 1] = w;
    }
    TimeWindows::new(windows)
}

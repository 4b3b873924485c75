//! Temporal reachability: snapshot components, earliest arrival and latest
//! departure tables, walk extraction, and forward/backward set profiles.

use fixedbitset::FixedBitSet;

use crate::error::ReachError;
use crate::graph::{AnchorSet, StaticGraph, Temporal, Time, Vertex};
use crate::walk::TemporalWalk;

/// Connected components of one snapshot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Dense component label per vertex, ordered by smallest member.
    pub label: Vec<u32>,
    pub members: Vec<Vec<Vertex>>,
    /// Component label of each anchor, in anchor order.
    pub anchor_component: Vec<u32>,
}

impl Components {
    pub fn of(snapshot: &StaticGraph, anchors: &[Vertex]) -> Self {
        let label = snapshot.component_labels();
        let count = label.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut members = vec![Vec::new(); count];
        for (v, &l) in label.iter().enumerate() {
            members[l as usize].push(v as Vertex);
        }
        let anchor_component = anchors.iter().map(|&a| label[a as usize]).collect();
        Components {
            label,
            members,
            anchor_component,
        }
    }

    pub fn same(&self, u: Vertex, v: Vertex) -> bool {
        self.label[u as usize] == self.label[v as usize]
    }
}

/// Components of snapshot `t`, with the component label of each anchor.
pub fn components<G: Temporal + ?Sized>(g: &G, t: Time, anchors: &[Vertex]) -> Components {
    Components::of(&g.snapshot(t), anchors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Walks leave the source: `time[u]` is the earliest arrival at `u`.
    Forward,
    /// Walks end at the source: `time[u]` is the latest snapshot at which `u`
    /// can still start a walk that reaches the source by the window's end.
    Backward,
}

/// Reachability from (or to) one source over a snapshot window, with one
/// predecessor link per vertex for walk reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrivalTable {
    pub direction: Direction,
    pub source: Vertex,
    pub window: (Time, Time),
    time: Vec<Option<Time>>,
    /// Forward: predecessor vertex. Backward: successor vertex.
    link: Vec<Option<Vertex>>,
}

impl ArrivalTable {
    /// Forward: earliest arrival (`t0 - 1` for the source). Backward: latest
    /// departure (`t1 + 1` for the source).
    pub fn time(&self, u: Vertex) -> Option<Time> {
        self.time[u as usize]
    }

    pub fn reached(&self, u: Vertex) -> bool {
        self.time[u as usize].is_some()
    }

    pub fn link(&self, u: Vertex) -> Option<Vertex> {
        self.link[u as usize]
    }

    pub fn reached_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.time
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some())
            .map(|(v, _)| v as Vertex)
    }

    pub fn reached_count(&self) -> usize {
        self.time.iter().filter(|t| t.is_some()).count()
    }
}

/// Forward search along an arbitrary increasing sequence of snapshots.
/// Stops early once `stop` (if any) is reached or every vertex is.
fn forward_search<G: Temporal + ?Sized>(
    g: &G,
    source: Vertex,
    times: impl IntoIterator<Item = Time>,
    before: Time,
    stop: Option<Vertex>,
) -> (Vec<Option<Time>>, Vec<Option<Vertex>>) {
    let n = g.vertex_count();
    let mut time = vec![None; n];
    let mut link = vec![None; n];
    time[source as usize] = Some(before);
    let mut count = 1;
    let mut fresh: Vec<(Vertex, Vertex)> = Vec::new();
    for t in times {
        if count == n || stop.is_some_and(|s| time[s as usize].is_some()) {
            break;
        }
        let snap = g.snapshot(t);
        fresh.clear();
        for e in snap.edges() {
            let (a, b) = (e.lo(), e.hi());
            match (time[a as usize], time[b as usize]) {
                (Some(_), None) => fresh.push((b, a)),
                (None, Some(_)) => fresh.push((a, b)),
                _ => {}
            }
        }
        // smallest predecessor wins ties
        fresh.sort_unstable();
        for &(v, pred) in &fresh {
            if time[v as usize].is_none() {
                time[v as usize] = Some(t);
                link[v as usize] = Some(pred);
                count += 1;
            }
        }
    }
    (time, link)
}

/// Earliest arrival from `v` within snapshots `t0..=t1`.
///
/// Each snapshot relaxes every active edge once against vertices reached in
/// earlier snapshots, so at most one edge per snapshot is used.
pub fn earliest_arrival<G: Temporal + ?Sized>(g: &G, v: Vertex, t0: Time, t1: Time) -> ArrivalTable {
    assert!(t0 >= 1 && t0 <= t1 + 1 && t1 <= g.lifetime(), "bad window {t0}..={t1}");
    let (time, link) = forward_search(g, v, t0..=t1, t0 - 1, None);
    ArrivalTable {
        direction: Direction::Forward,
        source: v,
        window: (t0, t1),
        time,
        link,
    }
}

/// Earliest arrival at `target` from `v` starting at `t0`, searching up to
/// `t1`. Cheaper than a full table when only one vertex matters.
pub fn arrival_at<G: Temporal + ?Sized>(g: &G, v: Vertex, target: Vertex, t0: Time, t1: Time) -> Option<TemporalWalk> {
    if t0 > t1 + 1 || t0 == 0 || t1 > g.lifetime() {
        return (v == target).then(|| TemporalWalk::new(v));
    }
    let (time, link) = forward_search(g, v, t0..=t1, t0 - 1, Some(target));
    let table = ArrivalTable {
        direction: Direction::Forward,
        source: v,
        window: (t0, t1),
        time,
        link,
    };
    extract_walk(g, &table, target).ok()
}

/// Latest departure towards `v` within snapshots `t0..=t1`: the time-reversed
/// counterpart of [`earliest_arrival`].
pub fn latest_departure<G: Temporal + ?Sized>(g: &G, v: Vertex, t0: Time, t1: Time) -> ArrivalTable {
    assert!(t0 >= 1 && t0 <= t1 + 1 && t1 <= g.lifetime(), "bad window {t0}..={t1}");
    let n = g.vertex_count();
    let mut time = vec![None; n];
    let mut link = vec![None; n];
    time[v as usize] = Some(t1 + 1);
    let mut count = 1;
    let mut fresh: Vec<(Vertex, Vertex)> = Vec::new();
    for t in (t0..=t1).rev() {
        if count == n {
            break;
        }
        let snap = g.snapshot(t);
        fresh.clear();
        for e in snap.edges() {
            let (a, b) = (e.lo(), e.hi());
            match (time[a as usize], time[b as usize]) {
                (Some(_), None) => fresh.push((b, a)),
                (None, Some(_)) => fresh.push((a, b)),
                _ => {}
            }
        }
        fresh.sort_unstable();
        for &(u, succ) in &fresh {
            if time[u as usize].is_none() {
                time[u as usize] = Some(t);
                link[u as usize] = Some(succ);
                count += 1;
            }
        }
    }
    ArrivalTable {
        direction: Direction::Backward,
        source: v,
        window: (t0, t1),
        time,
        link,
    }
}

/// Reconstructs a walk from the table. Forward tables give `source -> u`,
/// backward tables give `u -> source`.
pub fn extract_walk<G: Temporal + ?Sized>(_g: &G, table: &ArrivalTable, u: Vertex) -> Result<TemporalWalk, ReachError> {
    if !table.reached(u) {
        return Err(ReachError::Unreachable(u));
    }
    match table.direction {
        Direction::Forward => {
            let mut chain = Vec::new();
            let mut at = u;
            while at != table.source {
                let pred = table.link(at).expect("reached vertex without predecessor");
                chain.push((pred, at, table.time(at).unwrap()));
                at = pred;
            }
            let mut walk = TemporalWalk::new(table.source);
            for &(from, to, t) in chain.iter().rev() {
                walk.push(from, to, t);
            }
            Ok(walk)
        }
        Direction::Backward => {
            let mut walk = TemporalWalk::new(u);
            let mut at = u;
            while at != table.source {
                let succ = table.link(at).expect("reached vertex without successor");
                walk.push(at, succ, table.time(at).unwrap());
                at = succ;
            }
            Ok(walk)
        }
    }
}

/// Walk from `v` to `u` using only the listed snapshots, given that `v` and
/// `u` share a component in each of them and at least `n` are listed.
pub fn walk_through_snapshots<G: Temporal + ?Sized>(
    g: &G,
    v: Vertex,
    u: Vertex,
    snapshots: &[Time],
) -> Result<TemporalWalk, ReachError> {
    if v == u {
        return Ok(TemporalWalk::new(v));
    }
    let n = g.vertex_count();
    if snapshots.len() < n {
        return Err(ReachError::TooFewSnapshots {
            needed: n,
            got: snapshots.len(),
        });
    }
    if let Some(i) = snapshots.windows(2).position(|w| w[0] >= w[1]) {
        return Err(ReachError::NotIncreasing(i + 1));
    }
    if let Some(&bad) = snapshots
        .iter()
        .find(|&&t| t < 1 || t > g.lifetime() || !Components::of(&g.snapshot(t), &[]).same(v, u))
    {
        return Err(ReachError::NotConnected(bad));
    }
    let before = snapshots[0] - 1;
    let (time, link) = forward_search(g, v, snapshots.iter().copied(), before, Some(u));
    let table = ArrivalTable {
        direction: Direction::Forward,
        source: v,
        window: (snapshots[0], *snapshots.last().unwrap()),
        time,
        link,
    };
    extract_walk(g, &table, u)
}

/// Forward/backward reachable-set evolution of one source over a window,
/// partitioned by anchor components, plus the recorded-vertex log.
///
/// The sets are computed with the set-update rule directly (a vertex joins at
/// `t` if it was already in, or has an active edge at `t` to a member from
/// `t - 1`), independently of [`earliest_arrival`].
#[derive(Clone, Debug)]
pub struct ReachProfile {
    pub source: Vertex,
    pub window: (Time, Time),
    anchors: Vec<Vertex>,
    /// `forward[t - t0]` is the union over anchors of `F_{i,t}`.
    forward: Vec<FixedBitSet>,
    /// `backward[t - t0]` is the union over anchors of `B_{i,t}`.
    backward: Vec<FixedBitSet>,
    /// `owner[t - t0][u]`: index of the smallest anchor in `u`'s component.
    owner: Vec<Vec<u32>>,
    interfaces: Vec<Vec<Vertex>>,
    /// `(w, t, source)` log; one entry per `(w, t)`.
    pub recorded: Vec<(Vertex, Time, Vertex)>,
}

impl ReachProfile {
    fn idx(&self, t: Time) -> usize {
        assert!(t >= self.window.0 && t <= self.window.1, "snapshot {t} outside profile");
        t - self.window.0
    }

    pub fn anchor_count(&self) -> usize {
        self.anchors.len()
    }

    pub fn forward_union(&self, t: Time) -> &FixedBitSet {
        &self.forward[self.idx(t)]
    }

    pub fn backward_union(&self, t: Time) -> &FixedBitSet {
        &self.backward[self.idx(t)]
    }

    /// Index of the smallest anchor sharing `u`'s component at `t`.
    pub fn owner(&self, t: Time, u: Vertex) -> usize {
        self.owner[self.idx(t)][u as usize] as usize
    }

    fn part(&self, set: &FixedBitSet, t: Time, i: usize) -> Vec<Vertex> {
        let owner = &self.owner[self.idx(t)];
        let own = owner[self.anchors[i] as usize];
        set.ones().filter(|&u| owner[u] == own).map(|u| u as Vertex).collect()
    }

    /// `F_{i,t}`: forward-reached vertices inside anchor `i`'s component.
    pub fn forward(&self, t: Time, i: usize) -> Vec<Vertex> {
        self.part(self.forward_union(t), t, i)
    }

    /// `B_{i,t}`: vertices of anchor `i`'s component that can reach the source
    /// using snapshots `t..=t1`.
    pub fn backward(&self, t: Time, i: usize) -> Vec<Vertex> {
        self.part(self.backward_union(t), t, i)
    }

    /// Forward union just before `t` (`{source}` before the window).
    pub fn forward_before(&self, t: Time) -> FixedBitSet {
        if t == self.window.0 {
            self.singleton()
        } else {
            self.forward_union(t - 1).clone()
        }
    }

    /// Backward union just after `t` (`{source}` after the window).
    pub fn backward_after(&self, t: Time) -> FixedBitSet {
        if t == self.window.1 {
            self.singleton()
        } else {
            self.backward_union(t + 1).clone()
        }
    }

    fn singleton(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.forward[0].len());
        s.insert(self.source as usize);
        s
    }

    /// `I_t`: vertices outside `A = F_{t-1} ∩ B_{t+1}` adjacent at `t` to `A`.
    pub fn interface(&self, t: Time) -> &[Vertex] {
        &self.interfaces[self.idx(t)]
    }

    pub fn forward_grew(&self, t: Time) -> bool {
        self.forward_union(t).count_ones(..) > self.forward_before(t).count_ones(..)
    }

    pub fn backward_grew(&self, t: Time) -> bool {
        self.backward_union(t).count_ones(..) > self.backward_after(t).count_ones(..)
    }
}

fn evolve(snap: &StaticGraph, previous: &FixedBitSet) -> FixedBitSet {
    let mut next = previous.clone();
    for e in snap.edges() {
        let (a, b) = (e.lo() as usize, e.hi() as usize);
        if previous.contains(a) {
            next.insert(b);
        }
        if previous.contains(b) {
            next.insert(a);
        }
    }
    next
}

/// Builds the forward/backward profile of `v` over `t0..=t1`.
///
/// Fails if some snapshot of the window has a vertex with no anchor in its
/// component.
pub fn fb_profile<G: Temporal + ?Sized>(
    g: &G,
    s: &AnchorSet,
    v: Vertex,
    t0: Time,
    t1: Time,
) -> Result<ReachProfile, ReachError> {
    if t0 < 1 || t0 > t1 || t1 > g.lifetime() {
        return Err(crate::error::GraphError::WindowOutOfRange {
            start: t0,
            end: t1,
            lifetime: g.lifetime(),
        }
        .into());
    }
    s.check_range(g.vertex_count())?;
    let n = g.vertex_count();
    let len = t1 - t0 + 1;
    let mut owner = Vec::with_capacity(len);
    for t in t0..=t1 {
        let comps = components(g, t, s.vertices());
        let mut by_label = vec![u32::MAX; comps.members.len()];
        for (i, &l) in comps.anchor_component.iter().enumerate() {
            let slot = &mut by_label[l as usize];
            if *slot == u32::MAX || s.vertices()[i] < s.vertices()[*slot as usize] {
                *slot = i as u32;
            }
        }
        let row: Vec<u32> = comps.label.iter().map(|&l| by_label[l as usize]).collect();
        if let Some(bad) = row.iter().position(|&o| o == u32::MAX) {
            return Err(ReachError::NotSConnected {
                time: t,
                vertex: bad as Vertex,
            });
        }
        owner.push(row);
    }

    let mut seed = FixedBitSet::with_capacity(n);
    seed.insert(v as usize);
    let mut forward = Vec::with_capacity(len);
    let mut prev = seed.clone();
    for t in t0..=t1 {
        let cur = evolve(&g.snapshot(t), &prev);
        forward.push(cur.clone());
        prev = cur;
    }
    let mut backward = vec![FixedBitSet::new(); len];
    let mut next = seed;
    for t in (t0..=t1).rev() {
        let cur = evolve(&g.snapshot(t), &next);
        backward[t - t0] = cur.clone();
        next = cur;
    }

    let mut profile = ReachProfile {
        source: v,
        window: (t0, t1),
        anchors: s.vertices().to_vec(),
        forward,
        backward,
        owner,
        interfaces: Vec::with_capacity(len),
        recorded: Vec::new(),
    };
    for t in t0..=t1 {
        let mut core = profile.forward_before(t);
        core.intersect_with(&profile.backward_after(t));
        let snap = g.snapshot(t);
        let mut iface = FixedBitSet::with_capacity(n);
        for e in snap.edges() {
            let (a, b) = (e.lo() as usize, e.hi() as usize);
            if core.contains(a) && !core.contains(b) {
                iface.insert(b);
            }
            if core.contains(b) && !core.contains(a) {
                iface.insert(a);
            }
        }
        let iface: Vec<Vertex> = iface.ones().map(|w| w as Vertex).collect();
        profile.interfaces.push(iface);
    }
    for t in t0..=t1 {
        if profile.forward_grew(t) && profile.backward_grew(t) {
            let rec: Vec<_> = profile.interface(t).iter().map(|&w| (w, t, v)).collect();
            profile.recorded.extend(rec);
        }
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;
    use crate::walk::verify_walk;

    fn snaps(n: usize, lists: &[&[(u32, u32)]]) -> TemporalGraph {
        let s = lists
            .iter()
            .map(|l| StaticGraph::new(n, l.iter().copied()).unwrap())
            .collect();
        TemporalGraph::from_snapshots(n, s).unwrap()
    }

    #[test]
    fn edgeless_components_are_singletons() {
        let g = snaps(3, &[&[]]);
        let c = components(&g, 1, &[0]);
        assert_eq!(c.members, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn source_present_before_window() {
        let g = snaps(3, &[&[(0, 1)], &[(1, 2)], &[]]);
        let table = earliest_arrival(&g, 0, 2, 3);
        assert_eq!(table.time(0), Some(1));
        assert_eq!(table.time(1), None);
        let table = earliest_arrival(&g, 0, 1, 3);
        assert_eq!(table.time(2), Some(2));
    }

    #[test]
    fn times_must_increase() {
        // path v=0, a=1, b=2; (0,1) only at t=2, (1,2) only at t=1
        let g = snaps(3, &[&[(1, 2)], &[(0, 1)]]);
        let table = earliest_arrival(&g, 0, 1, 2);
        assert_eq!(table.time(1), Some(2));
        assert_eq!(table.time(2), None);
        assert_eq!(extract_walk(&g, &table, 2), Err(ReachError::Unreachable(2)));
    }

    #[test]
    fn extract_trivial_walks() {
        let g = snaps(2, &[&[], &[], &[(0, 1)]]);
        let table = earliest_arrival(&g, 0, 1, 3);
        assert!(extract_walk(&g, &table, 0).unwrap().is_empty());
        let w = extract_walk(&g, &table, 1).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.steps()[0].time, 3);
        assert!(verify_walk(&g, &w).is_ok());
    }

    #[test]
    fn predecessor_ties_prefer_smallest() {
        // vertex 3 reachable at t=2 from both 1 and 2
        let g = snaps(4, &[&[(0, 1), (0, 2)], &[(1, 3), (2, 3)]]);
        let table = earliest_arrival(&g, 0, 1, 2);
        assert_eq!(table.link(3), Some(1));
    }

    #[test]
    fn backward_table_walks_end_at_source() {
        let g = snaps(3, &[&[(0, 1)], &[(1, 2)]]);
        let table = latest_departure(&g, 2, 1, 2);
        assert_eq!(table.time(1), Some(2));
        assert_eq!(table.time(0), Some(1));
        let w = extract_walk(&g, &table, 0).unwrap();
        assert_eq!(w.start(), 0);
        assert_eq!(w.end(), 2);
        assert!(verify_walk(&g, &w).is_ok());
    }

    #[test]
    fn walk_through_snapshots_trivial_cases() {
        let g = snaps(2, &[&[(0, 1)], &[(0, 1)]]);
        assert!(walk_through_snapshots(&g, 1, 1, &[1, 2]).unwrap().is_empty());
        let w = walk_through_snapshots(&g, 0, 1, &[1, 2]).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.steps()[0].time, 1);
    }

    #[test]
    fn walk_through_snapshots_reports_first_bad_snapshot() {
        let g = snaps(3, &[&[(0, 1), (1, 2)], &[(0, 1)], &[(0, 2)], &[(1, 2)]]);
        assert_eq!(
            walk_through_snapshots(&g, 0, 2, &[1, 2, 3]),
            Err(ReachError::NotConnected(2))
        );
        assert_eq!(
            walk_through_snapshots(&g, 0, 2, &[1, 3]),
            Err(ReachError::TooFewSnapshots { needed: 3, got: 2 })
        );
    }

    #[test]
    fn profile_base_cases() {
        let g = snaps(4, &[&[(0, 1), (2, 3)], &[(1, 2), (2, 3)], &[(0, 3), (1, 2)]]);
        let s = AnchorSet::new(vec![0, 2]).unwrap();
        let p = fb_profile(&g, &s, 0, 1, 3).unwrap();
        assert_eq!(p.forward(1, 0), vec![0, 1]);
        assert!(p.forward(1, 1).is_empty());
        assert_eq!(p.backward(3, 0), vec![0, 3]);
        assert_eq!(p.forward_union(2).ones().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn profile_needs_s_connectivity() {
        let g = snaps(3, &[&[(0, 1)]]);
        assert!(matches!(
            fb_profile(&g, &AnchorSet::single(0), 0, 1, 1),
            Err(ReachError::NotSConnected { time: 1, vertex: 2 })
        ));
    }
}

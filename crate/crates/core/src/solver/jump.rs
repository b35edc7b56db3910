//! Jump/look-backward solver. Penalty levels are processed in increasing
//! order; at each level the frontier of possible solutions jumps forward by
//! the reach of one more primitive from the last position of a lower level,
//! and vertices are only solved exactly when a jump or the final vertex
//! depends on them.

use crate::error::SolverError;
use crate::fit::Fitter;
use crate::geom::Polyline;
use crate::reach::ReachTables;

use super::{
    improves, reconstruct, LevelTrace, Link, PenaltyConfig, Solution, SolveStats, SolverConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Level,
    ArcSetup,
    ArcScan,
    ArcResume,
    SegSetup,
    SegScan,
    SegResume,
    LevelEnd,
}

/// One pending `solve(i, target)` call.
#[derive(Clone, Copy, Debug)]
struct Frame {
    i: usize,
    target: u32,
    stage: Stage,
    /// Penalty level being tried at `i`.
    level: u32,
    /// Source penalty of the current scan.
    source: u32,
    k: usize,
    lo: usize,
}

impl Frame {
    fn new(i: usize, target: u32) -> Self {
        Frame {
            i,
            target,
            stage: Stage::Level,
            level: 0,
            source: 0,
            k: 0,
            lo: 0,
        }
    }
}

/// Mutable state of one jump run.
pub struct JumpState<'a> {
    pen: PenaltyConfig,
    tables: &'a ReachTables,
    fitter: Fitter<'a>,
    n: usize,
    /// Per penalty level, the last vertex that may still have that penalty.
    pub(crate) last: Vec<Option<usize>>,
    pub(crate) penalty: Vec<u32>,
    pub(crate) solved: Vec<bool>,
    pub(crate) error: Vec<f64>,
    pred: Vec<Option<Link>>,
    pub(crate) position: usize,
    solve_calls: u64,
    max_depth: usize,
}

impl<'a> JumpState<'a> {
    pub fn new(
        poly: &'a Polyline,
        tol: f64,
        cfg: &SolverConfig,
        tables: &'a ReachTables,
    ) -> Result<Self, SolverError> {
        cfg.penalties.validate()?;
        let n = poly.len();
        tables.validate(n)?;
        let mut s = JumpState {
            pen: cfg.penalties,
            tables,
            fitter: Fitter::new(poly, tol, cfg.fit, cfg.track_duplicates),
            n,
            last: vec![Some(0)],
            penalty: vec![0; n],
            solved: vec![false; n],
            error: vec![0.0; n],
            pred: vec![None; n],
            position: 0,
            solve_calls: 0,
            max_depth: 0,
        };
        s.solved[0] = true;
        Ok(s)
    }

    /// `LAST[p]`, with negative or unset levels reading as `None`.
    pub fn last(&self, p: i64) -> Option<usize> {
        if p < 0 {
            None
        } else {
            self.last.get(p as usize).copied().flatten()
        }
    }

    pub fn penalty(&self, i: usize) -> u32 {
        self.penalty[i]
    }

    pub fn is_solved(&self, i: usize) -> bool {
        self.solved[i]
    }

    pub fn error(&self, i: usize) -> f64 {
        self.error[i]
    }

    /// Accepts `LAST[p]` if that vertex is solved at exactly `p` or is a
    /// possible solution with penalty at most `p`; otherwise moves `LAST[p]`
    /// back by one vertex.
    pub fn chk_adj_pos(&mut self, p: u32) -> bool {
        let Some(l) = self.last[p as usize] else {
            return false;
        };
        let ok = if self.solved[l] {
            self.penalty[l] == p
        } else {
            self.penalty[l] <= p
        };
        if !ok {
            self.last[p as usize] = l.checked_sub(1);
        }
        ok
    }

    /// Moves `LAST[p]` back until it is valid or drops below `bound`.
    pub fn adjust(&mut self, bound: usize, p: u32) {
        while self.last[p as usize].is_some_and(|l| bound <= l) {
            if self.chk_adj_pos(p) {
                return;
            }
        }
    }

    fn offer(&mut self, i: usize, err: f64, link: Link) {
        let replace = match &self.pred[i] {
            Some(best) if self.solved[i] => improves(err, &link, self.error[i], best),
            _ => true,
        };
        if replace {
            self.error[i] = err;
            self.pred[i] = Some(link);
            self.solved[i] = true;
        }
    }

    /// Whether vertex `i` has a solution of exactly `target` penalty,
    /// searching backward from `i`. Nested calls are kept on an explicit
    /// stack.
    pub fn solve(&mut self, i: usize, target: u32) -> Result<bool, SolverError> {
        self.solve_calls += 1;
        if self.solved[i] {
            return Ok(self.penalty[i] == target);
        }
        let min_pen = self.pen.p_seg.min(self.pen.p_arc);
        let bound = (target / min_pen) as usize + 2;
        let mut stack = vec![Frame::new(i, target)];
        let mut ret = false;

        while let Some(top) = stack.len().checked_sub(1) {
            let mut f = stack[top];
            match f.stage {
                Stage::Level => {
                    if self.penalty[f.i] > f.target {
                        ret = false;
                        stack.pop();
                        continue;
                    }
                    f.level = self.penalty[f.i];
                    f.stage = if self.last(f.level as i64).is_some_and(|l| f.i <= l) {
                        Stage::ArcSetup
                    } else {
                        Stage::LevelEnd
                    };
                }
                Stage::ArcSetup => {
                    f.stage = Stage::SegSetup;
                    if f.level >= self.pen.p_arc && f.i + 1 >= self.pen.min_arc_vertices {
                        let q = f.level - self.pen.p_arc;
                        let lo = self.tables.bw_arc[f.i];
                        self.adjust(lo, q);
                        if let Some(l) = self.last[q as usize] {
                            let hi = l.min(f.i + 1 - self.pen.min_arc_vertices);
                            if hi >= lo {
                                f.source = q;
                                f.k = hi;
                                f.lo = lo;
                                f.stage = Stage::ArcScan;
                            }
                        }
                    }
                }
                Stage::SegSetup => {
                    f.stage = Stage::LevelEnd;
                    if f.level >= self.pen.p_seg {
                        let q = f.level - self.pen.p_seg;
                        let lo = self.tables.bw_seg[f.i];
                        self.adjust(lo, q);
                        if let Some(l) = self.last[q as usize] {
                            let hi = l.min(f.i - 1);
                            if hi >= lo {
                                f.source = q;
                                f.k = hi;
                                f.lo = lo;
                                f.stage = Stage::SegScan;
                            }
                        }
                    }
                }
                Stage::ArcScan | Stage::SegScan => {
                    self.solve_calls += 1;
                    f.stage = if f.stage == Stage::ArcScan {
                        Stage::ArcResume
                    } else {
                        Stage::SegResume
                    };
                    if self.solved[f.k] {
                        ret = self.penalty[f.k] == f.source;
                    } else {
                        stack[top] = f;
                        if stack.len() >= bound {
                            return Err(SolverError::DepthExceeded {
                                depth: stack.len() + 1,
                                bound,
                            });
                        }
                        stack.push(Frame::new(f.k, f.source));
                        self.max_depth = self.max_depth.max(stack.len());
                        continue;
                    }
                }
                Stage::ArcResume => {
                    if ret {
                        if let Some(fit) = self.fitter.arc(f.k, f.i) {
                            let err = self.error[f.k] + fit.sse;
                            self.offer(f.i, err, Link::arc(f.k, fit));
                        }
                    }
                    if f.k > f.lo {
                        f.k -= 1;
                        f.stage = Stage::ArcScan;
                    } else {
                        f.stage = Stage::SegSetup;
                    }
                }
                Stage::SegResume => {
                    if ret {
                        if let Some(fit) = self.fitter.segment(f.k, f.i) {
                            let err = self.error[f.k] + fit.sse;
                            self.offer(f.i, err, Link::segment(f.k, fit));
                        }
                    }
                    if f.k > f.lo {
                        f.k -= 1;
                        f.stage = Stage::SegScan;
                    } else {
                        f.stage = Stage::LevelEnd;
                    }
                }
                Stage::LevelEnd => {
                    if self.solved[f.i] {
                        ret = self.penalty[f.i] == f.target;
                        stack.pop();
                        continue;
                    }
                    self.penalty[f.i] += 1;
                    f.stage = Stage::Level;
                }
            }
            stack[top] = f;
        }
        Ok(ret)
    }

    /// Runs penalty levels until the last vertex is solved.
    fn run(&mut self, trace: Option<&mut Vec<LevelTrace>>) -> Result<(), SolverError> {
        let (ps, pa) = (self.pen.p_seg as i64, self.pen.p_arc as i64);
        let n = self.n;
        let max_level = self.pen.p_seg as u64 * n as u64;
        let mut trace = trace;
        let mut processed: u32 = 0;
        loop {
            processed += 1;
            if processed as u64 > max_level {
                return Err(SolverError::RunawayPenalty(processed));
            }
            self.last.push(None);
            let calls_before = self.solve_calls;
            let mut retries = 0u32;
            let p = processed as i64;
            let target = loop {
                let seg_src = self.last(p - ps);
                let arc_src = self.last(p - pa);
                let i = seg_src.map(|s| self.tables.fw_seg[s]);
                let j = arc_src.map(|s| self.tables.fw_arc[s]);
                let k = i.max(j);
                if k.is_none() {
                    break None;
                }
                if i <= j && !self.chk_adj_pos((p - pa) as u32) {
                    retries += 1;
                    continue;
                }
                if i >= j && !self.chk_adj_pos((p - ps) as u32) {
                    retries += 1;
                    continue;
                }
                let ok = if i < j {
                    self.solve(arc_src.unwrap(), (p - pa) as u32)?
                } else if i > j {
                    self.solve(seg_src.unwrap(), (p - ps) as u32)?
                } else {
                    let (s, a) = (seg_src.unwrap(), arc_src.unwrap());
                    if !self.solved[s] && !self.solved[a] {
                        self.solve(a, (p - pa) as u32)?
                    } else {
                        true
                    }
                };
                if !ok {
                    retries += 1;
                    continue;
                }
                break k;
            };
            if let Some(t) = trace.as_deref_mut() {
                t.push(LevelTrace {
                    level: processed,
                    target,
                    retries,
                    solve_calls: self.solve_calls - calls_before,
                });
            }
            let Some(k) = target else { continue };
            while self.position < k {
                self.position += 1;
                self.penalty[self.position] = processed;
                self.solved[self.position] = false;
            }
            self.last[processed as usize] = Some(self.position);
            if self.position + 1 == n {
                if self.solve(self.position, processed)? {
                    return Ok(());
                }
                self.last[processed as usize] = self.position.checked_sub(1);
            }
            log::trace!("level {processed}: position {}", self.position);
        }
    }
}

/// Solves with the jump/look-backward algorithm using `tables`.
pub fn jump_compress(
    poly: &Polyline,
    tol: f64,
    cfg: &SolverConfig,
    tables: &ReachTables,
) -> Result<Solution, SolverError> {
    let mut state = JumpState::new(poly, tol, cfg, tables)?;
    let mut trace = Vec::new();
    if poly.len() > 1 {
        state.run(cfg.trace.then_some(&mut trace))?;
    }
    let n = poly.len();
    let compressed = reconstruct(&state.pred, state.error[n - 1], &state.pen)?;
    if compressed.total_penalty != state.penalty[n - 1] {
        return Err(SolverError::NoSolution);
    }
    Ok(Solution {
        compressed,
        stats: SolveStats {
            fits: state.fitter.count_fit_calls(),
            solve_calls: state.solve_calls,
            levels: state.last.len() as u32 - 1,
            max_depth: state.max_depth,
        },
        trace,
    })
}

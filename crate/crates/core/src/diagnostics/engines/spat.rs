//! Spatial items: object layouts on a 3x3 grid described by adjacency
//! sentences. The solver enumerates every grid placement consistent with
//! the description; a query only passes if all consistent placements agree
//! on the answer, which catches mirror- or rotation-ambiguous layouts.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{pick, pick_distinct, place_gold, words_of, Engine};

pub(crate) struct SpatialEngine;

const SHAPES: &[&str] = &[
    "triangle", "square", "circle", "star", "diamond", "heart", "cross", "arrow", "moon",
    "hexagon",
];

const NONE_TEXT: &str = "none";

/// Directions as (dx, dy) in grid coordinates; y grows downward.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dir {
    Left,
    Right,
    Above,
    Below,
}

impl Dir {
    fn delta(self) -> (i32, i32) {
        match self {
            Dir::Left => (-1, 0),
            Dir::Right => (1, 0),
            Dir::Above => (0, -1),
            Dir::Below => (0, 1),
        }
    }

    fn phrase(self) -> &'static str {
        match self {
            Dir::Left => "to the left of",
            Dir::Right => "to the right of",
            Dir::Above => "above",
            Dir::Below => "below",
        }
    }

    const ALL: [Dir; 4] = [Dir::Left, Dir::Right, Dir::Above, Dir::Below];
}

#[derive(Clone, Debug)]
enum Constraint {
    /// `a` is directly `dir` of `b`.
    Directed { a: String, dir: Dir, b: String },
    /// `a` is in one of the four cells adjacent to `b`. Never generated;
    /// parsed so underdetermined hand-written layouts are detectable.
    NextTo { a: String, b: String },
}

impl Engine for SpatialEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::Spat
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        loop {
            let count = rng.gen_range(3..=4usize);
            let shapes: Vec<String> = pick_distinct(rng, SHAPES, count)
                .into_iter()
                .map(|s| s.to_string())
                .collect();

            // Random placement on the grid, then describe it with a chain
            // of adjacency sentences.
            let mut cells: Vec<(i32, i32)> = Vec::new();
            let mut ok = true;
            for i in 0..count {
                if i == 0 {
                    cells.push((rng.gen_range(0..3), rng.gen_range(0..3)));
                    continue;
                }
                // attach next shape adjacent to an already placed one
                let mut placed = false;
                for _ in 0..12 {
                    let anchor = rng.gen_range(0..i);
                    let dir = *pick(rng, &Dir::ALL);
                    let (dx, dy) = dir.delta();
                    let cand = (cells[anchor].0 + dx, cells[anchor].1 + dy);
                    if (0..3).contains(&cand.0)
                        && (0..3).contains(&cand.1)
                        && !cells.contains(&cand)
                    {
                        cells.push(cand);
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }

            // One sentence per shape after the first, anchored to the
            // shape it was attached to.
            let mut sentences = vec![format!("there is a {} on the grid", shapes[0])];
            for i in 1..count {
                // find an anchor: some earlier shape adjacent to cell i
                let (anchor_idx, dir) = (0..i)
                    .find_map(|j| {
                        Dir::ALL.iter().find_map(|&d| {
                            let (dx, dy) = d.delta();
                            ((cells[j].0 + dx, cells[j].1 + dy) == cells[i]).then_some((j, d))
                        })
                    })
                    .expect("attached adjacent");
                sentences.push(format!(
                    "the {} is directly {} the {}",
                    shapes[i],
                    dir.phrase(),
                    shapes[anchor_idx]
                ));
            }
            let context = format!("{} .", sentences.join(" . "));

            // Query: pick a target shape and direction. Empty-cell queries
            // (answer "none") are held near one in four so the fixed option
            // text carries no exploitable base rate.
            let want_none = rng.gen_bool(0.25);
            let combos: Vec<(usize, Dir)> = (0..count)
                .flat_map(|ti| Dir::ALL.into_iter().map(move |d| (ti, d)))
                .filter(|&(ti, d)| {
                    let (dx, dy) = d.delta();
                    let qc = (cells[ti].0 + dx, cells[ti].1 + dy);
                    let empty = !cells.contains(&qc);
                    empty == want_none
                })
                .collect();
            if combos.is_empty() {
                continue;
            }
            let (ti, dir) = *pick(rng, &combos);
            let (dx, dy) = dir.delta();
            let query_cell = (cells[ti].0 + dx, cells[ti].1 + dy);
            let occupant = cells.iter().position(|&c| c == query_cell);
            let gold = match occupant {
                Some(j) => shapes[j].clone(),
                None => NONE_TEXT.to_string(),
            };
            let question = format!(
                "which shape is directly {} the {} ?",
                dir.phrase(),
                shapes[ti]
            );

            // Mentioned shapes (minus target and gold) are the natural
            // decoys; "none" is always on offer when it is not the answer.
            let mut decoys: Vec<String> = Vec::new();
            if gold != NONE_TEXT {
                decoys.push(NONE_TEXT.to_string());
            }
            let mut mentioned: Vec<&String> = shapes
                .iter()
                .filter(|s| **s != gold && **s != shapes[ti])
                .collect();
            while decoys.len() < 3 && !mentioned.is_empty() {
                let k = rng.gen_range(0..mentioned.len());
                decoys.push(mentioned.remove(k).clone());
            }
            while decoys.len() < 3 {
                let cand = pick(rng, SHAPES).to_string();
                if cand != gold && !decoys.contains(&cand) && !shapes.contains(&cand) {
                    decoys.push(cand);
                }
            }
            let (options, answer_index) = place_gold(rng, gold, decoys);
            return DiagnosticItem::new(context, question, options, answer_index);
        }
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        let mut constraints: Vec<Constraint> = Vec::new();
        let mut shapes: Vec<String> = Vec::new();
        let mut note = |s: &str| {
            if !shapes.iter().any(|x| x == s) {
                shapes.push(s.to_string());
            }
        };
        for sentence in item.context.split(" . ") {
            let s = sentence.trim_end_matches(" .").trim();
            if s.is_empty() {
                continue;
            }
            let t: Vec<&str> = s.split_whitespace().collect();
            match t.as_slice() {
                ["there", "is", "a", shape, "on", "the", "grid"] => note(shape),
                [..] if t.len() >= 6 && t[0] == "the" && t[2] == "is" => {
                    let a = t[1];
                    let rest = t[3..].join(" ");
                    let parsed = Dir::ALL.iter().find_map(|&d| {
                        rest.strip_prefix(&format!("directly {} the ", d.phrase()))
                            .map(|b| (d, b.to_string()))
                    });
                    if let Some((dir, b)) = parsed {
                        note(a);
                        note(&b);
                        constraints.push(Constraint::Directed { a: a.to_string(), dir, b });
                    } else if let Some(b) = rest.strip_prefix("next to the ") {
                        note(a);
                        note(b);
                        constraints.push(Constraint::NextTo { a: a.to_string(), b: b.to_string() });
                    } else {
                        return Err(FailReason::UnparseableContext);
                    }
                }
                _ => return Err(FailReason::UnparseableContext),
            }
        }
        if shapes.is_empty() || shapes.len() > 5 {
            return Err(FailReason::UnparseableContext);
        }

        let q: Vec<&str> = item.question.split_whitespace().collect();
        if q.len() < 7 || q[0] != "which" || q[1] != "shape" || q[2] != "is" || q[3] != "directly" {
            return Err(FailReason::UnparseableQuestion);
        }
        let tail = q[4..].join(" ");
        let (qdir, target) = Dir::ALL
            .iter()
            .find_map(|&d| {
                tail.strip_prefix(&format!("{} the ", d.phrase()))
                    .and_then(|rest| rest.strip_suffix(" ?"))
                    .map(|t| (d, t.to_string()))
            })
            .ok_or(FailReason::UnparseableQuestion)?;
        if !shapes.iter().any(|s| *s == target) {
            return Err(FailReason::UnparseableQuestion);
        }

        // Enumerate all placements consistent with every constraint.
        let mut answers: Vec<Option<String>> = Vec::new();
        let cells: Vec<(i32, i32)> = (0..9).map(|i| (i % 3, i / 3)).collect();
        let mut assignment: Vec<(i32, i32)> = Vec::new();
        enumerate(
            &shapes,
            &cells,
            &constraints,
            &mut assignment,
            &mut |placement| {
                let ti = shapes.iter().position(|s| *s == target).unwrap();
                let (dx, dy) = qdir.delta();
                let qc = (placement[ti].0 + dx, placement[ti].1 + dy);
                let occ = placement.iter().position(|&c| c == qc);
                let ans = occ.map(|j| shapes[j].clone());
                if !answers.contains(&ans) {
                    answers.push(ans);
                }
            },
        );

        let gold = match answers.as_slice() {
            [] => return Err(FailReason::NoSolution),
            [one] => one.clone().unwrap_or_else(|| NONE_TEXT.to_string()),
            _ => return Err(FailReason::AmbiguousDistractor),
        };
        let hits: Vec<usize> = item
            .options
            .iter()
            .enumerate()
            .filter(|(_, o)| **o == gold)
            .map(|(i, _)| i)
            .collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            [] => Err(FailReason::NoSolution),
            _ => Err(FailReason::AmbiguousDistractor),
        }
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v = words_of(&[
            "there is a on the grid directly to left right of above below next which shape . ?",
        ]);
        v.extend(SHAPES.iter().map(|s| s.to_string()));
        v.push(NONE_TEXT.to_string());
        v
    }
}

/// Depth-first enumeration of injective shape -> cell assignments that
/// satisfy all constraints. The grid has at most 9 cells and 5 shapes, so
/// exhaustive search is cheap.
fn enumerate(
    shapes: &[String],
    cells: &[(i32, i32)],
    constraints: &[Constraint],
    assignment: &mut Vec<(i32, i32)>,
    visit: &mut impl FnMut(&[(i32, i32)]),
) {
    if assignment.len() == shapes.len() {
        if satisfies(shapes, assignment, constraints) {
            visit(assignment);
        }
        return;
    }
    for &c in cells {
        if !assignment.contains(&c) {
            assignment.push(c);
            enumerate(shapes, cells, constraints, assignment, visit);
            assignment.pop();
        }
    }
}

fn satisfies(shapes: &[String], placement: &[(i32, i32)], constraints: &[Constraint]) -> bool {
    let pos = |name: &str| -> Option<(i32, i32)> {
        shapes.iter().position(|s| s == name).map(|i| placement[i])
    };
    constraints.iter().all(|c| match c {
        Constraint::Directed { a, dir, b } => match (pos(a), pos(b)) {
            (Some(pa), Some(pb)) => {
                let (dx, dy) = dir.delta();
                pa == (pb.0 + dx, pb.1 + dy)
            }
            _ => false,
        },
        Constraint::NextTo { a, b } => match (pos(a), pos(b)) {
            (Some(pa), Some(pb)) => {
                (pa.0 - pb.0).abs() + (pa.1 - pb.1).abs() == 1
            }
            _ => false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_items_solve_to_their_answer_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let item = SpatialEngine.generate(&mut rng);
            assert_eq!(
                SpatialEngine.solve(&item).unwrap(),
                item.answer_index,
                "item: {item:?}"
            );
        }
    }

    #[test]
    fn classic_triangle_square_circle_layout() {
        let item = DiagnosticItem::new(
            "there is a square on the grid . the triangle is directly to the left of the square . the circle is directly above the triangle .",
            "which shape is directly below the circle ?",
            vec!["triangle".into(), "square".into(), "circle".into(), "none".into()],
            0,
        );
        assert_eq!(SpatialEngine.solve(&item).unwrap(), 0);
    }

    #[test]
    fn underdetermined_layout_is_ambiguous() {
        // "next to" does not pin the side, so the queried neighbor differs
        // between mirror placements.
        let item = DiagnosticItem::new(
            "there is a square on the grid . the triangle is next to the square .",
            "which shape is directly to the left of the square ?",
            vec!["triangle".into(), "none".into(), "circle".into(), "star".into()],
            0,
        );
        assert!(matches!(
            SpatialEngine.solve(&item),
            Err(FailReason::AmbiguousDistractor)
        ));
    }
}

mod common;

use common::*;
use timed_learn_core::learn::*;
use timed_learn_core::teacher::*;
use timed_learn_core::transform::{canonicalize, is_strict};
use timed_learn_core::{equivalent, isomorphic, Letter, Rational, TimedWord};

type Cell = (u8, &'static str);

fn hi(t: &ObservationTable, s: &str) -> HiWord {
    t.from_timed(&w(s)).unwrap()
}

fn cell_at(t: &ObservationTable, u: &str, e: &str) -> Cell {
    let word = hi(t, u).into_iter().chain(hi(t, e)).collect::<Vec<_>>();
    let bit = t.member(&word).unwrap_or_else(|| panic!("no bit for {u}·{e}"));
    let r = t.reset(&word).unwrap_or_else(|| panic!("no reset for {u}·{e}"));
    let r = match r {
        0 => "0",
        1 => "1/2",
        3 => "3/2",
        5 => "5/2",
        _ => panic!("unexpected reset {r}"),
    };
    (u8::from(bit), r)
}

/// Checks `K`, `S`, `E`, the listed rows and that every other extension row is `star`.
fn check(t: &ObservationTable, k: u32, s: &[&str], e: &[&str], rows: &[(&str, &[Cell])], star: &[Cell]) {
    assert_eq!(t.k(), k, "constant of\n{t}");
    let ss: Vec<HiWord> = s.iter().map(|x| hi(t, x)).collect();
    assert_eq!(t.s(), &ss[..], "S of\n{t}");
    let es: Vec<HiWord> = e.iter().map(|x| hi(t, x)).collect();
    assert_eq!(t.e(), &es[..], "E of\n{t}");
    let listed: Vec<HiWord> = rows.iter().map(|(u, _)| hi(t, u)).collect();
    for (u, expect) in rows {
        let got: Vec<Cell> = e.iter().map(|col| cell_at(t, u, col)).collect();
        assert_eq!(&got[..], *expect, "row {u} of\n{t}");
    }
    for ext in t.extensions() {
        if listed.contains(&ext) {
            continue;
        }
        let u = t.to_timed(&ext).to_string();
        let got: Vec<Cell> = e.iter().map(|col| cell_at(t, &u, col)).collect();
        assert_eq!(&got[..], star, "extension {u} of\n{t}");
    }
}

fn record(run: impl FnOnce(Observer<'_>)) -> Vec<Snap> {
    let mut log = Vec::new();
    let mut obs = |e: &LearnEvent<'_>| log.push(snap(e));
    run(&mut obs);
    log
}

const Z: Cell = (0, "0");
const H: Cell = (0, "1/2");
const ONE: Cell = (1, "0");

#[test]
fn smart_teacher_reproduces_the_example_tables() {
    let target = two_a();
    let teacher = ScriptedTeacher::new(SimulatedTeacher::new(&target).unwrap(), [w("0:a 1/2:a 3/2:a")]);
    let mut result = None;
    let log = record(|obs| result = Some(learn_smart(&teacher, &LearnConfig::default(), Some(obs))));
    let learned = result.unwrap().unwrap();

    let actions: Vec<u8> = log
        .iter()
        .filter_map(|s| match s {
            Snap::Processed(a, _) => Some(a.number()),
            _ => None,
        })
        .collect();
    assert_eq!(actions, [4, 1, 1, 3, 2]);

    let Snap::Started(t0) = &log[0] else { panic!("no start") };
    assert!(!t0.is_valid());
    check(t0, 0, &[""], &[""], &[("", &[Z]), ("0:a", &[Z]), ("1/2:a", &[H])], &[]);

    let Snap::Processed(Action::RaiseForValidity, t0p) = &log[1] else { panic!("{:?}", log[1]) };
    assert!(t0p.is_valid());
    check(t0p, 1, &[""], &[""], &[("", &[Z]), ("1/2:a", &[H])], &[Z]);

    let Snap::Processed(Action::MoveToS(moved), t0pp) = &log[2] else { panic!("{:?}", log[2]) };
    assert_eq!(moved, &hi(t0pp, "1/2:a"));
    check(t0pp, 1, &["", "1/2:a"], &[""], &[("", &[Z]), ("1/2:a", &[H]), ("1/2:a 3/2:a", &[ONE])], &[Z]);
    assert_eq!(t0pp.closedness_witness(), Some(hi(t0pp, "1/2:a 3/2:a")));

    let Snap::Processed(Action::MoveToS(_), t1) = &log[3] else { panic!("{:?}", log[3]) };
    let s1 = ["", "1/2:a", "1/2:a 3/2:a"];
    let rows1: [(&str, &[Cell]); 3] = [("", &[Z]), ("1/2:a", &[H]), ("1/2:a 3/2:a", &[ONE])];
    check(t1, 1, &s1, &[""], &rows1, &[Z]);
    assert!(t1.is_closed());
    assert_eq!(t1.inconsistency(), Some(Inconsistency::B { word: hi(t1, "1/2:a 1:a") }));

    let Snap::Processed(Action::RaiseForConsistency, t1k2) = &log[4] else { panic!("{:?}", log[4]) };
    check(t1k2, 2, &s1, &[""], &rows1, &[Z]);
    assert!(t1k2.is_consistent());

    let Snap::Conjectured(_, a_t1_learned) = &log[5] else { panic!("{:?}", log[5]) };
    assert!(isomorphic(a_t1_learned, &a_t1()));

    let Snap::Refined(cex, t2_partial) = &log[6] else { panic!("{:?}", log[6]) };
    assert_eq!(cex, &w("0:a 1/2:a 3/2:a"));
    let s2 = ["", "1/2:a", "1/2:a 3/2:a", "0:a", "0:a 1/2:a", "0:a 1/2:a 3/2:a"];
    check(t2_partial, 2, &s2, &[""], &[], &[Z]);
    // rows match except for the column about to be added
    let (r_eps, r_h) = (t2_partial.row(&hi(t2_partial, "")), t2_partial.row(&hi(t2_partial, "1/2:a")));
    assert_ne!(r_eps, r_h);
    assert_eq!(
        t2_partial.inconsistency(),
        Some(Inconsistency::A {
            s1: vec![],
            s2: hi(t2_partial, "0:a"),
            sym: hi(t2_partial, "1/2:a")[0],
            e: vec![],
        })
    );

    let Snap::Processed(Action::AddColumn(col), t2) = &log[7] else { panic!("{:?}", log[7]) };
    assert_eq!(col, &hi(t2, "1/2:a"));
    check(
        t2,
        2,
        &s2,
        &["", "1/2:a"],
        &[
            ("", &[Z, H]),
            ("1/2:a", &[H, Z]),
            ("1/2:a 3/2:a", &[ONE, Z]),
            ("0:a", &[Z, Z]),
            ("0:a 1/2:a", &[Z, Z]),
            ("0:a 1/2:a 3/2:a", &[Z, Z]),
        ],
        &[Z, Z],
    );

    assert_eq!(log.len(), 9);
    assert!(isomorphic(&learned.automaton, &a_t2()));
    assert_eq!(learned.automaton.states().len(), 4);
    assert_eq!(learned.automaton.k(), 2);
    assert_eq!(learned.stats.tables_processed, 6);
}

#[test]
fn smart_teacher_unscripted_returns_the_canonical_acceptor() {
    let target = two_a();
    let teacher = SimulatedTeacher::new(&target).unwrap();
    let mut conjectures = Vec::new();
    let mut obs = |e: &LearnEvent<'_>| {
        if let LearnEvent::Conjectured { table, .. } = e {
            conjectures.push((table.distinct_rows(), table.k()));
        }
    };
    let learned = learn_smart(&teacher, &LearnConfig::default(), Some(&mut obs)).unwrap();
    assert!(isomorphic(&learned.automaton, &a_t2()));
    assert!(isomorphic(&learned.automaton, canonicalize(&target).unwrap().result()));
    // at most K_L + n tables, with K_L = 2 and four classes
    assert!(learned.stats.tables_processed <= 6, "{:?}", learned.stats);
    assert!(conjectures.windows(2).all(|p| p[0] < p[1]), "{conjectures:?}");
}

#[test]
fn smart_teacher_on_small_targets() {
    let empty = timed_learn_core::AutomatonBuilder::new(0, ["a"]).state("q").build().unwrap();
    let teacher = SimulatedTeacher::new(&empty).unwrap();
    let learned = learn_smart(&teacher, &LearnConfig::default(), None).unwrap();
    assert_eq!(learned.automaton.states().len(), 1);
    assert_eq!(learned.stats.equivalence_queries, 1);

    let target = a_q();
    let teacher = SimulatedTeacher::new(&target).unwrap();
    let learned = learn_smart(&teacher, &LearnConfig::default(), None).unwrap();
    assert!(isomorphic(&learned.automaton, canonicalize(&target).unwrap().result()));
    assert!(equivalent(&learned.automaton, &target).unwrap().is_equivalent());
}

#[test]
fn refine_uses_the_normal_form_under_the_teacher_resets() {
    let teacher = SimulatedTeacher::new(&xa_yb()).unwrap();
    let mut table = ObservationTable::new(teacher.alphabet().to_vec());
    let added = refine_smart(&mut table, &w("0.3:a 1.9:b"), &teacher).unwrap();
    assert_eq!(added, 2);
    assert!(table.in_s(&hi(&table, "1/2:a 2:b")));
    // already there: nothing new, cells stay filled
    assert_eq!(refine_smart(&mut table, &w("1/2:a 2:b"), &teacher).unwrap(), 0);
    assert!(table.is_total());
}

#[test]
fn process_step_rejects_finished_tables() {
    let empty = timed_learn_core::AutomatonBuilder::new(0, ["a"]).state("q").build().unwrap();
    let teacher = SimulatedTeacher::new(&empty).unwrap();
    let learned = learn_smart(&teacher, &LearnConfig::default(), None).unwrap();
    let mut table = learned.table;
    assert!(matches!(process_step(&mut table, &teacher), Err(LearnError::Precondition(_))));
    // one row, nothing accepted
    let conj = table.conjecture().unwrap();
    assert_eq!(conj.states().len(), 1);
    assert!(conj.accepting().is_empty());
}

#[test]
fn all_reset_branch_reproduces_the_bad_branch() {
    let target = two_a();
    let script = [w("1/2:a 3/2:a"), w("1/2:a 2:a"), w("0.2:a 1.3:a")];
    let teacher = ScriptedTeacher::new(SimulatedTeacher::new(&target).unwrap(), script);
    let never = |_: &TimedWord| -> Result<bool, TeacherError> { Ok(false) };
    let config = LearnConfig {
        max_tables: 40,
        ..LearnConfig::default()
    };
    let log = record(|obs| {
        let _ = learn_normal(&teacher, &config, Schedule::LockStep, Decisions::Follow(&never), Some(obs));
    });
    let mut it = log.iter();

    // reset values of T_0 are decided after the start event, so only bits here
    let Some(Snap::Started(t0)) = it.next() else { panic!() };
    for u in ["", "0:a", "1/2:a"] {
        assert_eq!(t0.member(&hi(t0, u)), Some(false));
    }
    let Some(Snap::Conjectured(_, empty)) = it.next() else { panic!() };
    assert_eq!(empty.states().len(), 1);
    assert!(empty.accepting().is_empty());

    let Some(Snap::Refined(_, t0p)) = it.next() else { panic!() };
    let s = ["", "1/2:a", "1/2:a 3/2:a"];
    check(t0p, 0, &s, &[""], &[("", &[Z]), ("1/2:a", &[Z]), ("1/2:a 3/2:a", &[ONE])], &[Z]);
    assert!(matches!(t0p.inconsistency(), Some(Inconsistency::B { .. })));

    let Some(Snap::Processed(Action::RaiseForConsistency, t0p1)) = it.next() else { panic!() };
    check(t0p1, 1, &s, &[""], &[("", &[Z]), ("1/2:a", &[Z]), ("1/2:a 3/2:a", &[ONE])], &[Z]);

    let e = "3/2:a";
    let Some(Snap::Processed(Action::AddColumn(col), t0pp)) = it.next() else { panic!() };
    assert_eq!(col, &hi(t0pp, e));
    check(
        t0pp,
        1,
        &s,
        &["", e],
        &[("", &[Z, Z]), ("1/2:a", &[Z, ONE]), ("1/2:a 3/2:a", &[ONE, Z])],
        &[Z, Z],
    );
    let Some(Snap::Conjectured(_, second)) = it.next() else { panic!() };
    assert!(isomorphic(second, &a_t0_second()));
    assert!(second.accepts(&w("1/2:a 2:a")).unwrap());

    let Some(Snap::Refined(_, _)) = it.next() else { panic!() };
    let e2 = "1/2:a 3/2:a";
    let Some(Snap::Processed(Action::AddColumn(col), t0ppp)) = it.next() else { panic!() };
    assert_eq!(col, &hi(t0ppp, e2));
    let s3 = ["", "1/2:a", "1/2:a 3/2:a", "1/2:a 2:a"];
    let rows3: [(&str, &[Cell]); 4] = [
        ("", &[Z, Z, ONE]),
        ("1/2:a", &[Z, ONE, Z]),
        ("1/2:a 3/2:a", &[ONE, Z, Z]),
        ("1/2:a 2:a", &[Z, Z, Z]),
    ];
    check(t0ppp, 1, &s3, &["", e, e2], &rows3, &[Z, Z, Z]);
    let Some(Snap::Processed(Action::RaiseForConsistency, t0ppp2)) = it.next() else { panic!() };
    check(t0ppp2, 2, &s3, &["", e, e2], &rows3, &[Z, Z, Z]);
    let Some(Snap::Conjectured(_, third)) = it.next() else { panic!() };
    assert!(isomorphic(third, &a_t0_third()));

    let Some(Snap::Refined(cex, grown)) = it.next() else { panic!() };
    assert_eq!(cex, &w("0.2:a 1.3:a"));
    let forms: Vec<TimedWord> = timed_learn_core::reset::enumerate_normal_forms(cex).into_iter().collect();
    assert_eq!(forms, [w("1/2:a 1:a"), w("1/2:a 3/2:a")]);
    assert_eq!(grown.s().len(), 5);
    assert!(grown.in_s(&hi(grown, "1/2:a 1:a")));
    let Some(Snap::Conjectured(_, again)) = it.next() else { panic!() };
    assert!(isomorphic(again, &a_t0_third()));
}

#[test]
fn normal_teacher_end_to_end() {
    let target = two_a();
    let teacher = SimulatedTeacher::new(&target).unwrap();
    let learned = learn_normal(&teacher, &LearnConfig::default(), Schedule::default(), Decisions::Enumerate, None).unwrap();
    assert!(is_strict(&learned.automaton));
    assert!(learned.automaton.validate().is_empty());
    assert!(equivalent(&learned.automaton, &target).unwrap().is_equivalent());
    assert!(learned.automaton.k() >= 2);
    let canonical = postprocess_to_canonical(&learned.automaton, &teacher).unwrap();
    let smart = learn_smart(&teacher, &LearnConfig::default(), None).unwrap();
    assert!(isomorphic(&canonical, &smart.automaton));
}

#[test]
fn normal_teacher_lock_step_schedule_also_terminates() {
    // breadth-first doubles the pool at every keepable cell, so keep the target tiny
    let target = timed_learn_core::AutomatonBuilder::new(0, ["a"])
        .edges("q0", "q1", "a", [timed_learn_core::Region::Point(0), timed_learn_core::Region::AboveK], timed_learn_core::ClockUpdate::Reset)
        .accepting("q1")
        .build()
        .unwrap();
    let teacher = SimulatedTeacher::new(&target).unwrap();
    let learned = learn_normal(&teacher, &LearnConfig::default(), Schedule::LockStep, Decisions::Enumerate, None).unwrap();
    assert!(equivalent(&learned.automaton, &target).unwrap().is_equivalent());
}

#[test]
fn syntactic_branch_shadows_the_smart_run() {
    let target = two_a();
    let teacher = SimulatedTeacher::new(&target).unwrap();
    let oracle = |u: &TimedWord| -> Result<bool, TeacherError> { Ok(!teacher.reset(u)?.is_zero()) };
    let mut guided = Vec::new();
    let mut check_resets = |e: &LearnEvent<'_>| {
        if let LearnEvent::Conjectured { table, conjecture } = e {
            for (word, r) in table.resets() {
                let expected = teacher.reset(&table.to_timed(word)).unwrap();
                assert_eq!(Rational::halves(*r as u64), expected);
            }
            guided.push((*conjecture).clone());
        }
    };
    let learned = learn_normal(
        &teacher,
        &LearnConfig::default(),
        Schedule::LockStep,
        Decisions::Follow(&oracle),
        Some(&mut check_resets),
    )
    .unwrap();
    let mut smart = Vec::new();
    let mut collect = |e: &LearnEvent<'_>| {
        if let LearnEvent::Conjectured { conjecture, .. } = e {
            smart.push((*conjecture).clone());
        }
    };
    learn_smart(&teacher, &LearnConfig::default(), Some(&mut collect)).unwrap();
    assert_eq!(guided.len(), smart.len());
    assert!(guided.iter().zip(&smart).all(|(a, b)| isomorphic(a, b)));
    assert!(isomorphic(&learned.automaton, &a_t2()));
}

#[test]
fn postprocess_of_a_normal_result_matches_the_canonical_form() {
    let target = a_q();
    let teacher = SimulatedTeacher::new(&target).unwrap();
    let learned = learn_normal(&teacher, &LearnConfig::default(), Schedule::default(), Decisions::Enumerate, None).unwrap();
    let canonical = postprocess_to_canonical(&learned.automaton, &teacher).unwrap();
    assert!(isomorphic(&canonical, canonicalize(&target).unwrap().result()));
    assert!(canonical.states().len() <= learned.automaton.states().len());
}

#[test]
fn unbounded_constant_hits_the_cap() {
    let alphabet = vec![Letter::new("a").unwrap()];
    let teacher = FnTeacher::new(
        alphabet,
        |u| u.len() == 1 && u.letters()[0].delay.is_integer(),
        |cand, _| {
            let n = Rational::from_integer(cand.k() as u64 + 1);
            let on_int = TimedWord::from_pairs([(n.clone(), Letter::new("a").unwrap())]);
            if cand.accepts(&on_int).unwrap() {
                Some(TimedWord::from_pairs([(&n + &Rational::halves(1), Letter::new("a").unwrap())]))
            } else {
                Some(on_int)
            }
        },
    )
    .with_reset(|_| Rational::zero());
    let err = learn_smart(&teacher, &LearnConfig::default(), None).unwrap_err();
    assert!(matches!(err, LearnError::CapExceeded { what: "K", limit: 16 }), "{err}");
}

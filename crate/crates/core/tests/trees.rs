use fringe::tree::TreeKind;
use fringe::{Tree, TreeError};
use proptest::prelude::*;

/// A random plane tree as a preorder degree sequence.
fn degree_sequence(max_n: usize) -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(0u32..4, 1..max_n).prop_map(|raw| {
        let mut seq = Vec::new();
        let mut open = 1usize;
        for d in raw {
            if open == 0 {
                break;
            }
            seq.push(d);
            open = open - 1 + d as usize;
        }
        seq.resize(seq.len() + open, 0);
        seq
    })
}

/// Slotted version of a plane tree: each child set gets increasing slots below `d`.
fn slotted(degrees: &[u32], d: u32, seed: u64) -> Tree {
    let t = Tree::from_preorder_degrees(degrees).unwrap();
    let mut text = String::new();
    fn write(t: &Tree, v: u32, d: u32, seed: &mut u64, out: &mut String) {
        out.push('[');
        let kids = t.children(v);
        let k = kids.len() as u32;
        let mut slot = 0;
        for (i, &c) in kids.iter().enumerate() {
            let room = d - k + i as u32;
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let jump = if room > slot { (*seed >> 33) as u32 % (room - slot + 1) } else { 0 };
            slot += jump;
            out.push_str(&format!("{slot}:"));
            write(t, c, d, seed, out);
            out.push(' ');
            slot += 1;
        }
        out.push(']');
    }
    let mut s = seed;
    write(&t, 0, d, &mut s, &mut text);
    Tree::parse(&text, TreeKind::Slotted(d)).unwrap()
}

proptest! {
    #[test]
    fn plane_text_round_trip(seq in degree_sequence(200)) {
        let t = Tree::from_preorder_degrees(&seq).unwrap();
        prop_assert_eq!(t.preorder_degrees(), seq.clone());
        let back = Tree::parse(&t.serialize(), TreeKind::Plane).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(Tree::parse_auto(&t.serialize(), None).unwrap(), t);
    }

    #[test]
    fn slotted_text_round_trip(seq in degree_sequence(120), seed in any::<u64>()) {
        let t = slotted(&seq, 4, seed);
        let back = Tree::parse(&t.serialize(), TreeKind::Slotted(4)).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.without_slots().preorder_degrees(), seq);
    }

    #[test]
    fn fringe_sizes_are_consistent(seq in degree_sequence(200)) {
        let t = Tree::from_preorder_degrees(&seq).unwrap();
        let sizes = t.fringe_sizes();
        prop_assert_eq!(sizes[0] as usize, t.len());
        for v in 0..t.len() as u32 {
            let below: u64 = t.children(v).iter().map(|&c| sizes[c as usize]).sum();
            prop_assert_eq!(sizes[v as usize], below + 1);
            prop_assert_eq!(t.fringe_subtree(v).len() as u64, sizes[v as usize]);
        }
        prop_assert_eq!(t.subtree_count_by_size().values().sum::<u64>(), t.len() as u64);
        prop_assert_eq!(t.degree_profile().iter().map(|(d, c)| *d as u64 * c).sum::<u64>(), t.len() as u64 - 1);
    }

    #[test]
    fn parents_match_children(seq in degree_sequence(200)) {
        let t = Tree::from_preorder_degrees(&seq).unwrap();
        prop_assert_eq!(t.parent(0), None);
        for v in 0..t.len() as u32 {
            for &c in t.children(v) {
                prop_assert_eq!(t.parent(c), Some(v));
                prop_assert!(c > v);
            }
        }
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(matches!(Tree::parse("", TreeKind::Plane), Err(TreeError::Empty)));
    assert!(Tree::parse("(()", TreeKind::Plane).is_err());
    assert!(Tree::parse("()()", TreeKind::Plane).is_err());
    assert!(Tree::parse("[2:[]]", TreeKind::Slotted(2)).is_err());
    assert!(Tree::parse("[1:[] 0:[]]", TreeKind::Slotted(2)).is_err());
    assert!(Tree::from_preorder_degrees(&[2, 0]).is_err());
    assert!(Tree::from_preorder_degrees(&[0, 0]).is_err());
}

#[test]
fn builders() {
    assert_eq!(Tree::path(5).serialize(), "((((()))))");
    assert_eq!(Tree::star(4).degree(0), 3);
    assert_eq!(Tree::complete_binary(3).len(), 7);
    assert_eq!(Tree::singleton().len(), 1);
}

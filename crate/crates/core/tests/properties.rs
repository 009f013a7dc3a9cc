use std::collections::{BTreeMap, BTreeSet};

use corefud_core::analysis::{anaphor_antecedent_ranking, mention_type_distribution};
use corefud_core::metrics::{b_cubed, ceafe, muc, ClusterSet, SingletonPolicy};
use corefud_core::{classify_mention_type, parse_conllu, serialize, MentionType, TokenRef};
use proptest::prelude::*;

const UPOS: [&str; 5] = ["NOUN", "PROPN", "PRON", "VERB", "DET"];
const DEPREL: [&str; 6] = ["nsubj", "obj", "nmod:poss", "obl", "det", "conj"];

/// A generated sentence: per token (upos, deprel, head offset seed) plus
/// mentions as (entity, first, last) word indices.
#[derive(Clone, Debug)]
struct GenSentence {
    tokens: Vec<(usize, usize, usize)>,
    mentions: Vec<(u8, usize, usize)>,
}

fn sentence() -> impl Strategy<Value = GenSentence> {
    (1usize..=7).prop_flat_map(|n| {
        (
            proptest::collection::vec((0..UPOS.len(), 0..DEPREL.len(), 0usize..100), n),
            proptest::collection::vec((0u8..4, 0..n, 0..n), 0..5),
        )
            .prop_map(|(tokens, raw)| {
                // Same-entity mentions must not overlap; drop the later ones.
                let mut kept: Vec<(u8, usize, usize)> = Vec::new();
                for (e, a, b) in raw {
                    let (a, b) = (a.min(b), a.max(b));
                    if kept.iter().all(|&(f, x, y)| f != e || b < x || y < a) {
                        kept.push((e, a, b));
                    }
                }
                GenSentence { tokens, mentions: kept }
            })
    })
}

fn render(doc: &[GenSentence]) -> String {
    let mut out = String::from("# newdoc id = d1\n");
    for (s, sent) in doc.iter().enumerate() {
        out += &format!("# sent_id = s{}\n", s + 1);
        for (i, &(u, d, h)) in sent.tokens.iter().enumerate() {
            let (head, rel) = if i == 0 { (0, "root") } else { (h % i + 1, DEPREL[d]) };
            let mut opens: Vec<&(u8, usize, usize)> = sent.mentions.iter().filter(|m| m.1 == i).collect();
            opens.sort_by_key(|m| std::cmp::Reverse(m.2));
            let mut misc = String::new();
            for m in sent.mentions.iter().filter(|m| m.2 == i && m.1 != i) {
                misc += &format!("e{})", m.0);
            }
            for m in &opens {
                misc += &format!("(e{}", m.0);
                if m.2 == i {
                    misc.push(')');
                }
            }
            let misc = if misc.is_empty() { "_".to_string() } else { format!("Entity={misc}") };
            out += &format!("{}\tw{}\tw\t{}\t_\t_\t{}\t{}\t_\t{}\n", i + 1, i + 1, UPOS[u], head, rel, misc);
        }
        out.push('\n');
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parse_serialize_is_identity(doc in proptest::collection::vec(sentence(), 1..4)) {
        let text = render(&doc);
        let corpus = parse_conllu(&text, "gen", "xx").unwrap();
        prop_assert_eq!(serialize(&corpus), text.clone());
        let again = parse_conllu(&serialize(&corpus), "gen", "xx").unwrap();
        prop_assert_eq!(&again, &corpus);

        let mut expected: BTreeSet<(String, Vec<TokenRef>)> = BTreeSet::new();
        for (s, sent) in doc.iter().enumerate() {
            for &(e, a, b) in &sent.mentions {
                expected.insert((format!("e{e}"), (a..=b).map(|t| TokenRef::new(s, t)).collect()));
            }
        }
        let got: BTreeSet<(String, Vec<TokenRef>)> = corpus.documents[0]
            .mentions()
            .map(|m| (m.entity_id.clone(), m.span.clone()))
            .collect();
        prop_assert_eq!(got, expected);
        for m in corpus.documents[0].mentions() {
            prop_assert!(m.contains(m.head));
        }
    }

    #[test]
    fn ranking_total_excludes_first_mentions(doc in proptest::collection::vec(sentence(), 1..4)) {
        let corpus = parse_conllu(&render(&doc), "gen", "xx").unwrap();
        let d = &corpus.documents[0];
        for t in MentionType::ALL {
            let of_type = d.mentions().filter(|m| classify_mention_type(d.head_token(m)) == t).count() as u64;
            let first_of_type = d
                .entities
                .iter()
                .filter(|e| classify_mention_type(d.head_token(&e.mentions[0])) == t)
                .count() as u64;
            let total: u64 = anaphor_antecedent_ranking(&corpus, t).iter().map(|(_, n)| n).sum();
            prop_assert_eq!(total, of_type - first_of_type);
        }
        let dist = mention_type_distribution(&corpus);
        let sum: u64 = dist.rows.iter().map(|r| r.value.numerator).sum();
        prop_assert_eq!(sum, corpus.mention_count() as u64);
    }
}

/// Random partition of a subset of `0..n` into clusters.
fn clusters(n: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    proptest::collection::vec(proptest::option::weighted(0.85, 0usize..5), n).prop_map(|labels| {
        let mut by_label: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for (k, l) in labels.into_iter().enumerate() {
            if let Some(l) = l {
                by_label.entry(l).or_default().push(k as u32);
            }
        }
        by_label.into_values().collect()
    })
}

fn policy() -> impl Strategy<Value = SingletonPolicy> {
    prop_oneof![Just(SingletonPolicy::Include), Just(SingletonPolicy::Exclude)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn scores_are_bounded_and_f1_is_harmonic(g in clusters(12), p in clusters(12), pol in policy()) {
        let g = ClusterSet::new(g, pol).unwrap();
        let p = ClusterSet::new(p, pol).unwrap();
        for prf in [muc(&g, &p), b_cubed(&g, &p), ceafe(&g, &p)] {
            for v in [prf.precision, prf.recall, prf.f1] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            prop_assert!(prf.f1 <= prf.precision.max(prf.recall) + 1e-12);
            prop_assert!(prf.f1 >= prf.precision.min(prf.recall) - 1e-12);
        }
    }

    #[test]
    fn permutation_invariance(g in clusters(10), p in clusters(10), seed in any::<u64>()) {
        let shuffle = |c: &Vec<Vec<u32>>| {
            let mut c = c.clone();
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) as usize };
            for cl in &mut c {
                for i in (1..cl.len()).rev() { let j = next() % (i + 1); cl.swap(i, j); }
            }
            for i in (1..c.len()).rev() { let j = next() % (i + 1); c.swap(i, j); }
            c
        };
        let pol = SingletonPolicy::Include;
        let (g1, p1) = (ClusterSet::new(g.clone(), pol).unwrap(), ClusterSet::new(p.clone(), pol).unwrap());
        let (g2, p2) = (ClusterSet::new(shuffle(&g), pol).unwrap(), ClusterSet::new(shuffle(&p), pol).unwrap());
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        for (x, y) in [(muc(&g1, &p1), muc(&g2, &p2)), (b_cubed(&g1, &p1), b_cubed(&g2, &p2)), (ceafe(&g1, &p1), ceafe(&g2, &p2))] {
            prop_assert!(close(x.precision, y.precision) && close(x.recall, y.recall) && close(x.f1, y.f1));
        }
    }

    #[test]
    fn removing_a_link_never_raises_muc_recall(g in clusters(10), p in clusters(10), pick in any::<prop::sample::Index>()) {
        let pol = SingletonPolicy::Include;
        let gold = ClusterSet::new(g, pol).unwrap();
        let before = muc(&gold, &ClusterSet::new(p.clone(), pol).unwrap()).recall;
        let splittable: Vec<usize> = (0..p.len()).filter(|&i| p[i].len() > 1).collect();
        prop_assume!(!splittable.is_empty());
        let i = splittable[pick.index(splittable.len())];
        let mut split = p.clone();
        let moved = split[i].pop().unwrap();
        split.push(vec![moved]);
        let after = muc(&gold, &ClusterSet::new(split, pol).unwrap()).recall;
        prop_assert!(after <= before + 1e-12);
    }

    #[test]
    fn identity_is_perfect(g in clusters(12)) {
        let g = ClusterSet::new(g, SingletonPolicy::Include).unwrap();
        prop_assume!(g.clusters().iter().any(|c| c.len() > 1));
        for prf in [muc(&g, &g), b_cubed(&g, &g), ceafe(&g, &g)] {
            prop_assert_eq!((prf.precision, prf.recall, prf.f1), (1.0, 1.0, 1.0));
        }
    }
}

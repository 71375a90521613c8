mod common;

use std::collections::{BTreeMap, BTreeSet};

use attrcomm::detect::{detect, expand_communities, select_centers};
use attrcomm::graph::structural_graph;
use attrcomm::similarity::similarity_matrix;
use attrcomm::{fixtures, modularity, Corpus, Document, EdgeList, Partition, TokenizerConfig};

use common::{below, dense_cosine, pair_sum_modularity, random_graph, rng, unit};

fn random_documents(r: &mut rand_chacha::ChaCha8Rng) -> Vec<Document> {
    let users = 2 + below(r, 9);
    let vocab = 3 + below(r, 15);
    (0..users)
        .map(|u| {
            let len = below(r, 25);
            let text: Vec<String> = (0..len).map(|_| format!("w{}", below(r, vocab))).collect();
            Document::new(format!("user{u}"), text.join(" "))
        })
        .collect()
}

/// Dense tf-idf rows built straight from the raw token lists.
fn dense_tfidf(tokens: &[Vec<String>]) -> Vec<Vec<f64>> {
    let terms: BTreeSet<&str> = tokens.iter().flatten().map(String::as_str).collect();
    let terms: Vec<&str> = terms.into_iter().collect();
    let n = tokens.len() as f64;
    let idf: Vec<f64> = terms
        .iter()
        .map(|t| {
            let df = tokens.iter().filter(|d| d.iter().any(|x| x == t)).count() as f64;
            (n / df).ln()
        })
        .collect();
    tokens
        .iter()
        .map(|doc| {
            terms
                .iter()
                .zip(&idf)
                .map(|(t, w)| {
                    if doc.is_empty() {
                        0.0
                    } else {
                        doc.iter().filter(|x| x == t).count() as f64 / doc.len() as f64 * w
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn similarity_matches_dense_oracle() {
    let mut r = rng(11);
    for _ in 0..200 {
        let docs = random_documents(&mut r);
        let tokens: Vec<Vec<String>> = docs
            .iter()
            .map(|d| d.text.split_whitespace().map(str::to_string).collect())
            .collect();
        let corpus = Corpus::from_documents(docs.clone(), &TokenizerConfig::default()).unwrap();
        let matrix = similarity_matrix(&corpus);
        let rows = dense_tfidf(&tokens);
        for (i, a) in docs.iter().enumerate() {
            for (j, b) in docs.iter().enumerate() {
                let got = matrix.get(
                    matrix.index_of(&a.user_id).unwrap(),
                    matrix.index_of(&b.user_id).unwrap(),
                );
                let expected = if i == j {
                    0.0
                } else {
                    dense_cosine(&rows[i], &rows[j])
                };
                assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
            }
        }
    }
}

fn disjoint_cliques(sizes: &[usize]) -> (attrcomm::WeightedGraph, Partition) {
    let mut edges = EdgeList::new();
    let mut groups = Vec::new();
    let mut next = 0;
    for &size in sizes {
        let members: Vec<String> = (next..next + size).map(|i| format!("n{i:03}")).collect();
        for a in 0..size {
            for b in a + 1..size {
                edges.insert(members[a].clone(), members[b].clone());
            }
        }
        next += size;
        groups.push(members);
    }
    let nodes: Vec<String> = groups.iter().flatten().cloned().collect();
    let g = structural_graph(&edges, &nodes).unwrap();
    (g, Partition::from_groups(&groups, sizes.len()).unwrap())
}

fn same_grouping(a: &Partition, b: &Partition) -> bool {
    let mut x = a.members();
    let mut y = b.members();
    x.sort();
    y.sort();
    x == y
}

#[test]
fn recovers_disjoint_cliques() {
    let mut r = rng(12);
    for _ in 0..100 {
        let count = 2 + below(&mut r, 4);
        let sizes: Vec<usize> = (0..count).map(|_| 2 + below(&mut r, 5)).collect();
        let (g, truth) = disjoint_cliques(&sizes);
        let found = detect(&g, count).unwrap();
        assert!(same_grouping(&found, &truth), "sizes {sizes:?}");
        let expected = pair_sum_modularity(&dense(&g), truth.assignment());
        assert!((modularity(&g, &found).unwrap() - expected).abs() < 1e-12);
    }
}

fn dense(g: &attrcomm::WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (i, j, w) in g.edges() {
        a[i][j] = w;
        a[j][i] = w;
    }
    a
}

/// Every detected community induces a connected subgraph over positive edges.
#[test]
fn communities_are_connected() {
    let mut r = rng(13);
    for _ in 0..300 {
        let unit_weights = unit(&mut r) < 0.5;
        let rg = random_graph(&mut r, 15, unit_weights);
        let g = rg.graph();
        let k = 1 + below(&mut r, rg.n);
        let p = detect(&g, k).unwrap();
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in p.assignment().iter().enumerate() {
            groups
                .entry(c)
                .or_default()
                .push(g.index_of(&p.nodes()[v]).unwrap());
        }
        for members in groups.values() {
            let inside: BTreeSet<usize> = members.iter().copied().collect();
            let mut seen = BTreeSet::from([members[0]]);
            let mut stack = vec![members[0]];
            while let Some(v) = stack.pop() {
                for &(u, w) in g.neighbors(v) {
                    if w > 0.0 && inside.contains(&u) && seen.insert(u) {
                        stack.push(u);
                    }
                }
            }
            assert_eq!(seen, inside);
        }
    }
}

#[test]
fn centers_seed_their_own_communities() {
    let mut r = rng(14);
    for _ in 0..200 {
        let rg = random_graph(&mut r, 12, false);
        let g = rg.graph();
        let k = 1 + below(&mut r, rg.n);
        let centers = select_centers(&g, k).unwrap();
        assert_eq!(centers.len(), k);
        let p = expand_communities(&g, &centers).unwrap();
        for (c, center) in centers.iter().enumerate() {
            assert_eq!(p.community_of(center), Some(c));
        }
        assert!(p.communities() >= k);
    }
}

#[test]
fn detection_is_deterministic() {
    let mut r = rng(15);
    for _ in 0..50 {
        let rg = random_graph(&mut r, 12, false);
        let k = 1 + below(&mut r, rg.n);
        let first = detect(&rg.graph(), k).unwrap();
        for _ in 0..3 {
            assert_eq!(detect(&rg.graph(), k).unwrap(), first);
        }
    }
}

#[test]
fn karate_faction_modularity_matches_pair_sum() {
    let club = fixtures::karate();
    let g = structural_graph(&club.edges, &club.nodes).unwrap();
    let expected = pair_sum_modularity(&dense(&g), club.factions.assignment());
    let q = modularity(&g, &club.factions).unwrap();
    assert!((q - expected).abs() < 1e-12);
    assert!((q - 0.3582).abs() < 1e-4);
}

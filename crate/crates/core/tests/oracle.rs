use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;
use splitter_core::bounds::{bound_f, bound_g};
use splitter_core::graph::{Arena, Graph, Radius};
use splitter_core::play::{Game, GameConfig, Role};
use splitter_core::rank::{naive_rank, Engine, EngineConfig};
use splitter_core::witness::extract_witness;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |mask| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn engine_matches_naive(g in graph_strategy(8), r in 1u32..=3, flags in 0u8..8) {
        let g = Arc::new(g);
        let r = Radius::new(r).unwrap();
        let cfg = EngineConfig::new(r).with_flags(flags & 1 != 0, flags & 2 != 0, flags & 4 != 0);
        let mut e = Engine::new(Arc::clone(&g), cfg);
        let k = e.splitter_rank(&e.full_arena()).unwrap();
        prop_assert_eq!(k, naive_rank(&Arena::full(g), r).unwrap());
    }

    #[test]
    fn analysis_agrees_with_naive_on_every_move(g in graph_strategy(6), r in 1u32..=2) {
        let g = Arc::new(g);
        let r = Radius::new(r).unwrap();
        let mut e = Engine::new(Arc::clone(&g), EngineConfig::new(r));
        let full = Arena::full(Arc::clone(&g));
        let analysis = e.analyze(&full).unwrap();
        let mut best = 0;
        for c in &analysis.per_connector {
            let ball = full.induced(c.ball.clone()).unwrap();
            prop_assert_eq!(c.ball_rank, naive_rank(&ball, r).unwrap());
            let mut value = usize::MAX;
            for s in c.ball.iter() {
                let after = naive_rank(&ball.delete_vertex(s).unwrap(), r).unwrap();
                value = value.min(after);
                prop_assert_eq!(c.argmin.contains(s), after == c.value);
                prop_assert_eq!(c.progressing.contains(s), after < c.ball_rank);
            }
            prop_assert_eq!(c.value, value);
            best = best.max(1 + value);
        }
        prop_assert_eq!(analysis.rank, best);
    }

    #[test]
    fn witness_is_small_and_keeps_rank(g in graph_strategy(7), r in 1u32..=2) {
        let g = Arc::new(g);
        let r = Radius::new(r).unwrap();
        let mut e = Engine::new(Arc::clone(&g), EngineConfig::new(r));
        let full = e.full_arena();
        let k = e.splitter_rank(&full).unwrap();
        let w = extract_witness(&mut e, &full).unwrap();
        let h = Arena::new(Arc::clone(&g), w.h.clone()).unwrap();
        prop_assert_eq!(naive_rank(&h, r).unwrap(), k);
        prop_assert!(BigUint::from(w.size()) <= bound_f(k, r));
        for c in full.members().iter() {
            let n = e.progressing_moves(&full, c).unwrap().len();
            prop_assert!(BigUint::from(n) <= bound_g(k, r));
        }
    }

    #[test]
    fn engine_splitter_wins_in_time(g in graph_strategy(8), r in 1u32..=2, picks in proptest::collection::vec(any::<prop::sample::Index>(), 8)) {
        let g = Arc::new(g);
        let mut game = Game::new(GameConfig::new(g, Radius::new(r).unwrap(), Role::Connector)).unwrap();
        let k = game.initial_rank();
        let mut round = 0;
        while !game.state().is_finished() {
            let arena = game.state().arena.to_vec();
            game.human_move(picks[round % picks.len()].get(&arena).to_owned()).unwrap();
            let ball = game.state().ball.clone().unwrap();
            // each answer lands on ball_rank or ball_rank - 1, so every one
            // of them implies the same ball rank
            let implied: Vec<usize> = ball
                .iter()
                .map(|v| game.what_if(v).map(|w| w.resulting_rank + usize::from(w.progressing)))
                .collect::<Result<_, _>>()
                .unwrap();
            let ball_rank = implied[0];
            prop_assert!(implied.iter().all(|&b| b == ball_rank), "{:?}", implied);
            prop_assert!(ball_rank <= k - round);
            game.play_engine().unwrap();
            round += 1;
        }
        prop_assert!(game.state().winner_round.unwrap() <= k);
    }
}

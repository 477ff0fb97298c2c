mod common;

use common::random_instance;
use pscp_core::export::BigMModel;
use pscp_core::instance::{parse_orlib, read_instance, write_instance, write_orlib};
use pscp_core::scenario_gen::synthetic_scp;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn text_format_round_trips(seed in 0u64..100_000, p_empty in 0.0f64..0.5) {
        let mut inst = random_instance(seed, p_empty);
        inst.meta.insert("seed".into(), seed.to_string());
        let text = write_instance(&inst);
        let back = read_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn column_index_is_the_transpose(seed in 0u64..100_000) {
        let inst = random_instance(seed, 0.2);
        for block in &inst.blocks {
            let index = block.col_index();
            prop_assert_eq!(index.len(), inst.n);
            for (w, support) in block.scenarios().iter().enumerate() {
                for &j in support {
                    prop_assert!(index[j].contains(&w));
                }
            }
            for (j, ws) in index.iter().enumerate() {
                prop_assert!(ws.windows(2).all(|p| p[0] < p[1]));
                for &w in ws {
                    prop_assert!(block.scenario(w).contains(&j));
                }
            }
        }
    }

    #[test]
    fn orlib_ignores_line_breaks(m in 1usize..20, n in 2usize..60, seed in 0u64..1000, width in 1usize..9) {
        let scp = synthetic_scp(m, n, 0.2, seed);
        let text = write_orlib(&scp);
        let (back, warnings) = parse_orlib(&text).unwrap();
        prop_assert_eq!(&back, &scp);
        prop_assert!(warnings.is_empty());
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let reflowed: String = tokens.chunks(width).map(|c| c.join("   ") + "\n").collect();
        prop_assert_eq!(parse_orlib(&reflowed).unwrap().0, scp);
    }

    #[test]
    fn bigm_text_round_trips(seed in 0u64..100_000, relax in any::<bool>()) {
        let inst = random_instance(seed, 0.2);
        let model = BigMModel::build(&inst, relax);
        let scenarios = inst.scenario_count();
        prop_assert_eq!(model.variable_count(), inst.n + scenarios);
        prop_assert_eq!(model.constraint_count(), scenarios + inst.m());
        prop_assert_eq!(BigMModel::parse_lp(&model.to_lp_string()).unwrap(), model);
    }
}

#[test]
fn checksum_detects_edits() {
    let text = write_instance(&random_instance(5, 0.0));
    let edited = text.replacen("PSCP 1\n", "PSCP 1\n\n", 1);
    assert!(read_instance(&edited).is_err());
}

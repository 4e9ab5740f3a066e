use iec::ann::hidden_neuron_count;
use iec::dataset::{encoded_width, synth_generate, Dataset};
use iec::ensemble::{self, augment, augment_dataset, IecModel};
use iec::{TrainConfig, TreeConfig};

fn quick() -> TrainConfig {
    TrainConfig {
        epochs: 400,
        ..Default::default()
    }
}

fn replicate_minority(d: &Dataset, copies: usize) -> Dataset {
    let idx: Vec<usize> = (0..d.n())
        .flat_map(|i| std::iter::repeat_n(i, if d.labels()[i] == 1 { copies } else { 1 }))
        .collect();
    d.subset(&idx).unwrap()
}

#[test]
fn structure_on_synthetic_data() {
    let d = synth_generate(1000, 5, 5, 0.2, 21).unwrap();
    let m = ensemble::fit(&d, TreeConfig::default(), &quick()).unwrap();
    assert!(!m.selected_features.is_empty());
    for &f in &m.selected_features {
        assert!(f < 10);
        assert!(m.tree.importances[f] > 0.0);
    }
    assert_eq!(m.d_m, encoded_width(d.specs(), &m.selected_features) + 1);
    assert_eq!(m.net.input_dim, m.d_m);
    assert_eq!(m.hidden_count(), hidden_neuron_count(1000, m.d_m).unwrap());
}

#[test]
fn tree_column_matches_tree_predictions() {
    let d = synth_generate(300, 3, 2, 0.25, 4).unwrap();
    let m = ensemble::fit(&d, TreeConfig::default(), &quick()).unwrap();
    let aug = augment_dataset(&d, &m.tree, &m.selected_features).unwrap();
    let op: Vec<u8> = aug.column(m.d_m - 1).map(|v| v as u8).collect();
    assert_eq!(op, m.tree.predict(&d).unwrap());
}

#[test]
fn predictions_are_batch_transparent_and_repeatable() {
    let d = synth_generate(200, 2, 2, 0.3, 8).unwrap();
    let m = ensemble::fit(&d, TreeConfig::default(), &quick()).unwrap();
    let batch = m.predict(&d).unwrap();
    let single: Vec<u8> = (0..d.n()).map(|i| m.predict_row(d.row(i)).unwrap()).collect();
    assert_eq!(batch, single);
    assert_eq!(batch, m.predict(&d).unwrap());
    let back = IecModel::from_json(&m.to_json().unwrap()).unwrap();
    assert_eq!(back.predict(&d).unwrap(), batch);
}

#[test]
fn fit_is_deterministic() {
    let d = synth_generate(200, 2, 2, 0.3, 9).unwrap();
    let a = ensemble::fit(&d, TreeConfig::default(), &quick()).unwrap();
    let b = ensemble::fit(&d, TreeConfig::default(), &quick()).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}

#[test]
fn minority_replication_keeps_selection_and_tree_column() {
    for seed in 0..5 {
        let d = synth_generate(200, 3, 3, 0.2, seed).unwrap();
        let base = ensemble::fit(&d, TreeConfig::default(), &quick()).unwrap();
        for c in [2, 5, 10] {
            let r = replicate_minority(&d, c);
            let m = ensemble::fit(&r, TreeConfig::default(), &quick()).unwrap();
            let mut a = base.selected_features.clone();
            let mut b = m.selected_features.clone();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "seed {seed}, x{c}");
            assert_eq!(
                base.tree.predict(&d).unwrap(),
                m.tree.predict(&d).unwrap(),
                "seed {seed}, x{c}"
            );
        }
    }
}

#[test]
fn unseen_category_at_prediction_time() {
    use iec::dataset::read_csv;
    use iec::dataset::read_csv_with_schema;
    let train = "board,score,class\nA,1,1\nA,2,1\nB,3,0\nB,4,0\nB,5,0\nA,6,0\nB,7,0\n";
    let d = read_csv(train.as_bytes(), "class", "1", &["board"]).unwrap();
    let m = ensemble::fit(&d, TreeConfig::default(), &quick()).unwrap();
    let test = "board,score,class\nC,1.5,1\n";
    let t = read_csv_with_schema(test.as_bytes(), "class", "1", d.specs()).unwrap();
    assert_eq!(m.predict(&t).unwrap().len(), 1);
    let aug = augment(t.features(), &m.tree, &m.selected_features).unwrap();
    assert_eq!(aug.ncols(), m.d_m);
}

use entaudit::feasibility::verify_prop2;
use entaudit::target::{search_default_layout, GateLayout};

#[test]
fn search_reproduces_the_shipped_layout() {
    let found = search_default_layout().unwrap();
    assert_eq!(found, GateLayout::default_layout());
    assert!(verify_prop2(&found).unwrap().pass);
}

#[test]
fn a_path_layout_does_not_block_every_tree() {
    // gates along the line v1 - v2 - … - v8 keep that line's cuts at rank 2
    let text = (1..8).map(|k| format!("v{k} v{}\n", k + 1)).collect::<String>();
    let r = verify_prop2(&GateLayout::parse(&text).unwrap()).unwrap();
    assert!(!r.pass);
    assert_eq!(r.records[0].max_rank, 2);
}

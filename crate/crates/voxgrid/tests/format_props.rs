use proptest::prelude::*;
use voxgrid::{read_grid, write_grid, Grid, OccupancyGrid, ProbGrid};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn occupancy_file_roundtrip(bits in prop::collection::vec(any::<bool>(), 512)) {
        let mut g = OccupancyGrid::new(8).unwrap();
        for (i, b) in bits.iter().enumerate() {
            g.set_linear(i, *b);
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.rgpp");
        write_grid(&g.clone().into(), &path).unwrap();
        match read_grid(&path).unwrap() {
            Grid::Occupancy(back) => prop_assert_eq!(back.bytes(), g.bytes()),
            _ => prop_assert!(false, "wrong kind"),
        }
    }

    #[test]
    fn prob_file_roundtrip(vals in prop::collection::vec(0.0f32..=1.0, 64)) {
        let g = ProbGrid::new(4, vals.clone()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.rgpp");
        write_grid(&g.into(), &path).unwrap();
        match read_grid(&path).unwrap() {
            Grid::Prob(back) => prop_assert_eq!(back.values(), vals.as_slice()),
            _ => prop_assert!(false, "wrong kind"),
        }
    }
}

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(parsed) = fairdense::io::parse_edge_list(text) {
        let mut buf = Vec::new();
        fairdense::io::save(&parsed.graph, &mut buf).unwrap();
        let again = fairdense::io::parse_edge_list(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(again.graph, parsed.graph);
        assert_eq!(again.duplicates, 0);
    }
});

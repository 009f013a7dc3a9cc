//! Published figures for CorefUD 1.1 (training data) and for the error
//! analysis of two CRAC 2022 systems on CorefUD 1.0 dev data.

#![allow(dead_code)]

/// dataset, docs, sentences per doc, tokens per sentence, entities, mentions.
pub const CORPUS: [(&str, u64, f64, f64, u64, u64); 17] = [
    ("ca_ancora", 1011, 10.52, 30.39, 13589, 48323),
    ("cs_pcedt", 1875, 21.24, 23.42, 39945, 136932),
    ("cs_pdt", 2533, 15.29, 16.85, 36378, 120024),
    ("en_gum", 151, 56.61, 17.05, 5816, 25615),
    ("hu_szegedkoref", 320, 22.31, 14.08, 3862, 12278),
    ("pl_pcc", 1463, 19.63, 15.03, 17748, 65915),
    ("es_ancora", 1080, 10.50, 31.63, 15532, 56668),
    ("lt_lcc", 80, 16.63, 22.62, 879, 3609),
    ("fr_democrat", 50, 207.64, 21.58, 5718, 38490),
    ("de_parcorfull", 15, 30.47, 18.93, 192, 737),
    ("de_potsdamcc", 142, 12.80, 14.68, 715, 2027),
    ("en_parcorfull", 15, 30.47, 19.18, 158, 710),
    ("ru_rucor", 145, 48.75, 17.48, 2803, 12509),
    ("hu_korkor", 76, 14.29, 17.91, 874, 3178),
    ("no_bokmaalnarc", 284, 46.02, 15.55, 4647, 21828),
    ("no_nynorsknarc", 336, 30.71, 16.74, 4307, 18354),
    ("tr_itcc", 19, 185.89, 12.46, 523, 2602),
];

/// Percentage of pre-modified mentions per language.
pub const PRE_MODIFIED: [(&str, f64); 12] = [
    ("ca", 13.0),
    ("cs", 22.0),
    ("en", 27.0),
    ("hu", 51.0),
    ("pl", 14.0),
    ("es", 14.0),
    ("lt", 52.0),
    ("fr", 28.0),
    ("de", 32.0),
    ("ru", 24.0),
    ("no", 18.0),
    ("tr", 52.0),
];

/// Percentage of entities whose first mention is the longest.
pub const FIRST_IS_LONGEST: [(&str, f64); 17] = [
    ("ca_ancora", 76.92),
    ("cs_pcedt", 87.10),
    ("cs_pdt", 75.22),
    ("en_gum", 69.55),
    ("hu_szegedkoref", 80.11),
    ("pl_pcc", 83.13),
    ("es_ancora", 77.25),
    ("lt_lcc", 81.80),
    ("fr_democrat", 82.46),
    ("de_parcorfull", 88.02),
    ("de_potsdamcc", 77.48),
    ("en_parcorfull", 89.24),
    ("ru_rucor", 83.41),
    ("hu_korkor", 82.27),
    ("no_bokmaalnarc", 81.62),
    ("no_nynorsknarc", 78.11),
    ("tr_itcc", 70.36),
];

/// Columns A to F for the baseline and the UFAL system, in that order per column.
pub const ERRORS: [(&str, [[f64; 2]; 6]); 13] = [
    ("ca_ancora", [[34.14, 21.06], [81.30, 82.40], [80.71, 81.90], [36.20, 40.30], [64.30, 62.5], [8.56, 6.91]]),
    ("cs_pcedt", [[33.80, 20.71], [88.15, 88.49], [77.74, 68.83], [41.60, 36.90], [53.70, 59.5], [7.74, 6.35]]),
    ("cs_pdt", [[35.50, 23.56], [84.70, 88.17], [82.78, 79.22], [46.60, 48.80], [54.90, 55.2], [5.87, 4.62]]),
    ("en_gum", [[38.85, 25.04], [75.19, 83.33], [86.45, 79.66], [48.30, 50.60], [61.30, 65.4], [4.87, 4.83]]),
    ("hu_szegedkoref", [[39.23, 34.01], [80.92, 83.33], [78.21, 82.80], [69.70, 70.20], [56.60, 53.1], [2.38, 2.32]]),
    ("pl_pcc", [[36.97, 23.05], [85.78, 90.25], [83.07, 82.18], [61.20, 61.00], [31.00, 31.8], [4.05, 4.06]]),
    ("es_ancora", [[35.50, 16.33], [85.29, 90.37], [81.32, 78.52], [32.00, 37.20], [68.20, 66.3], [9.29, 7.78]]),
    ("lt_lcc", [[27.84, 15.46], [66.67, 66.67], [88.89, 85.00], [87.50, 70.60], [15.60, 29.4], [1.47, 2.00]]),
    ("fr_democrat", [[43.22, 25.20], [76.18, 87.63], [85.19, 76.07], [52.80, 56.30], [61.10, 57.3], [3.62, 3.61]]),
    ("de_parcorfull", [[45.45, 36.36], [90.00, 87.50], [72.22, 64.29], [53.80, 66.70], [46.20, 55.6], [3.54, 2.67]]),
    ("de_potsdamcc", [[50.59, 27.06], [69.77, 95.65], [98.33, 84.09], [47.50, 51.40], [74.60, 75.7], [3.58, 3.87]]),
    ("en_parcorfull", [[43.75, 37.50], [85.71, 100.00], [66.67, 75.00], [37.50, 55.60], [62.50, 44.4], [6.25, 5.44]]),
    ("ru_rucor", [[35.80, 22.17], [80.65, 83.33], [74.80, 80.63], [61.80, 67.90], [32.60, 34.9], [2.66, 2.41]]),
];

/// Share of unresolved UFAL entities with two mentions, and share of those
/// entities' mentions left undetected, averaged over datasets.
pub const UFAL_TWO_MENTION: f64 = 81.0;
pub const UFAL_UNDETECTED: f64 = 78.0;

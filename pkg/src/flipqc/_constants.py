"""Hard-coded constants for the Gamma-type germs (30 significant digits)."""

EULER_GAMMA = 0.577215664901532860606512090082

# ZETA[k] = zeta(k) for k >= 2
ZETA = {
    2: 1.64493406684822643647241516665,
    3: 1.20205690315959428539973816151,
    4: 1.08232323371113819151600369654,
    5: 1.03692775514336992633136548646,
    6: 1.01734306198444913971451792979,
    7: 1.00834927738192282683979754985,
    8: 1.00407735619794433937868523851,
    9: 1.00200839282608221441785276923,
    10: 1.0009945751278180853371459589,
    11: 1.00049418860411946455870228253,
    12: 1.00024608655330804829863799805,
    13: 1.00012271334757848914675183653,
    14: 1.00006124813505870482925854511,
    15: 1.00003058823630702049355172851,
    16: 1.00001528225940865187173257149,
    17: 1.00000763719763789976227360029,
    18: 1.00000381729326499983985646164,
    19: 1.00000190821271655393892565696,
    20: 1.00000095396203387279611315204,
    21: 1.00000047693298678780646311672,
    22: 1.00000023845050272773299000365,
    23: 1.00000011921992596531107306779,
    24: 1.00000005960818905125947961244,
    25: 1.00000002980350351465228018606,
    26: 1.00000001490155482836504123466,
    27: 1.00000000745071178983542949198,
    28: 1.00000000372533402478845705482,
    29: 1.0000000018626597235130490064,
    30: 1.00000000093132743241966818287,
    31: 1.0000000004656629065033784073,
    32: 1.0000000002328311833676505492,
    33: 1.00000000011641550172700519776,
    34: 1.00000000005820772087902700889,
    35: 1.00000000002910385044497099687,
    36: 1.00000000001455192189104198424,
    37: 1.00000000000727595983505748101,
    38: 1.00000000000363797954737865119,
    39: 1.00000000000181898965030706595,
    40: 1.00000000000090949478402638893,
    41: 1.0000000000004547473783042154,
    42: 1.00000000000022737368458246525,
    43: 1.00000000000011368684076802278,
    44: 1.00000000000005684341987627586,
    45: 1.00000000000002842170976889302,
    46: 1.00000000000001421085482803161,
    47: 1.00000000000000710542739521085,
    48: 1.00000000000000355271369133711,
    49: 1.00000000000000177635684357912,
    50: 1.00000000000000088817842109308,
    51: 1.00000000000000044408921031438,
    52: 1.0000000000000002220446050798,
    53: 1.00000000000000011102230251411,
    54: 1.00000000000000005551115124845,
    55: 1.00000000000000002775557562136,
    56: 1.00000000000000001387778780973,
    57: 1.00000000000000000693889390454,
    58: 1.00000000000000000346944695217,
    59: 1.00000000000000000173472347605,
    60: 1.00000000000000000086736173801,
    61: 1.000000000000000000433680869,
    62: 1.0000000000000000002168404345,
    63: 1.00000000000000000010842021725,
    64: 1.00000000000000000005421010862,
}

# BERNOULLI[2k] for the Stirling-type tails
BERNOULLI = {
    2: 0.166666666666666666666666666667,
    4: -0.0333333333333333333333333333333,
    6: 0.0238095238095238095238095238095,
    8: -0.0333333333333333333333333333333,
    10: 0.0757575757575757575757575757576,
    12: -0.253113553113553113553113553114,
    14: 1.16666666666666666666666666667,
    16: -7.09215686274509803921568627451,
    18: 54.9711779448621553884711779449,
    20: -529.124242424242424242424242424,
    22: 6192.12318840579710144927536232,
    24: -86580.2531135531135531135531136,
    26: 1425517.16666666666666666666667,
    28: -27298231.0678160919540229885057,
    30: 601580873.900642368384303868175,
}

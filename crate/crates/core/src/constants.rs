/// Euler–Mascheroni constant, 30 significant digits.
pub const EULER_GAMMA_STR: &str = "0.577215664901532860606512090082";

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// Decimal expansion of π used to certify its continued-fraction convergents.
pub const PI_DIGITS: &str = "3.\
14159265358979323846264338327950288419716939937510582097494459230781640628620899\
86280348253421170679821480865132823066470938446095505822317253594081284811174502\
84102701938521105559644622948954930381964428810975665933446128475648233786783165\
27120190914564856692346034861";

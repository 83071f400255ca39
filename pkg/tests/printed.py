"""Reference data transcribed for the golden tests (Z2 quintic bi-center)."""

# complexified coefficients a_kj of the translated system, b_kj = conj(a_kj)
COMPLEX_TABLE = {
    (2, 0): "1/8*(13+2*i*a2-8*i*a6-2*a7)",
    (1, 1): "1/4*(5-2*i*a2+2*a7)",
    (0, 2): "1/8*i*(3*i+2*a2+8*a6+2*i*a7)",
    (3, 0): "1/16*(17+6*i*a2+2*a3-12*i*a6-6*a7+2*i*a8)",
    (2, 1): "3/16*(9-2*i*a2-2*a3-4*i*a6+2*a7-2*i*a8)",
    (1, 2): "3/16*(1-2*i*a2+2*a3+4*i*a6+2*a7+2*i*a8)",
    (0, 3): "1/16*i*(7*i+6*a2+2*i*a3+12*a6+6*i*a7-2*a8)",
    (4, 0): "1/64*(21+12*i*a2+8*a3-4*i*a4-16*i*a6-12*a7+8*i*a8+4*a9)",
    (3, 1): "1/16*(13-4*a3+4*i*a4-8*i*a6-4*i*a8-4*a9)",
    (2, 2): "3/32*(5-4*i*a2-4*i*a4+4*a7+4*a9)",
    (1, 3): "1/16*(-3+4*a3+4*i*a4+8*i*a6+4*i*a8-4*a9)",
    (0, 4): "1/64*(-11+12*i*a2-8*a3-4*i*a4+16*i*a6-12*a7-8*i*a8+4*a9)",
    (5, 0): "1/128*(5-4*i*a10+4*i*a2+4*a3-4*i*a4-4*i*a6-4*a7+4*i*a8+4*a9)",
    (4, 1): "1/128*(17+20*i*a10+4*i*a2-4*a3+12*i*a4-12*i*a6-4*a7-4*i*a8-12*a9)",
    (3, 2): "1/64*(9-20*i*a10-4*i*a2-4*a3-4*i*a4-4*i*a6+4*a7-4*i*a8+4*a9)",
    (2, 3): "1/64*(1+20*i*a10-4*i*a2+4*a3-4*i*a4+4*i*a6+4*a7+4*i*a8+4*a9)",
    (1, 4): "1/128*(-7-20*i*a10+4*i*a2+4*a3+12*i*a4+12*i*a6-4*a7+4*i*a8-12*a9)",
    (0, 5): "1/128*(-3+4*i*a10+4*i*a2-4*a3-4*i*a4+4*i*a6-4*a7-4*i*a8+4*a9)",
}

LAMBDA1 = {
    1: "1/12*(-48-10*a2^2-9*a3-36*a7-4*a7^2)",
    2: "1/108*(-1224+840*a2^2+140*a2^4-189*a2*a4-1620*a7+630*a2^2*a7-816*a7^2+70*a2^2*a7^2"
       "-180*a7^3-16*a7^4)",
    3: "1/103680*(-363672-2421720*a2^2-6039180*a2^4-779800*a2^6+1836513*a2*a4+997290*a2^3*a4"
       "-81648*a4^2-531900*a7-4219110*a2^2*a7-4458300*a2^4*a7+1281420*a2*a4*a7"
       "-316512*a7^2-2025030*a2^2*a7^2-539980*a2^4*a7^2+202608*a2*a4*a7^2-76860*a7^3-305760*a2^2*a7^3)",
}

LAMBDA1_RAW_TAU2 = (
    "1/384*(-5184-824*a2^2-260*a2^4-972*a3-852*a2^2*a3-153*a3^2-672*a2*a4-2160*a7+392*a2^2*a7"
    "+180*a3*a7+3376*a7^2+608*a2^2*a7^2+528*a3*a7^2+2096*a7^3+208*a7^4)"
)
LAMBDA1_K21 = "1/288*(156+682*a2^2+153*a3-792*a7-596*a7^2)"

LAMBDA2 = {
    1: "1/12*(-48-9*a3-192*a6^2-36*a7-4*a7^2)",
    2: "1/54*(-972-7200*a6^2-13248*a6^4-816*a7-3264*a6^2*a7-144*a7^2-96*a6^2*a7^2+4*a7^3-135*a9-36*a7*a9)",
    3: "1/2570940*(12398832+49595328*a6^2+5635584*a7+22542336*a6^2*a7-420420*a7^2+8407680*a6^2*a7^2"
       "-224640*a7^3-6920832*a6^2*a7^3-373348*a7^4-184512*a6^2*a7^4+7688*a7^5-1791558*a9"
       "-40807152*a6^2*a9-2137239*a7*a9+15718752*a6^2*a7*a9+709731*a7^2*a9-69192*a7^3*a9"
       "-899829*a9^2)",
}

LAMBDA3 = {
    1: "1/12*(-48-10*a2^2-9*a3+4*a2*a6-16*a6^2-36*a7-4*a7^2)",
    2: "1/54*(-612+420*a2^2+70*a2^4+3360*a2*a6+490*a2^3*a6+960*a6^2+1740*a2^2*a6^2+8320*a2*a6^3"
       "+5632*a6^4-810*a7+315*a2^2*a7+2520*a2*a6*a7+720*a6^2*a7-408*a7^2+35*a2^2*a7^2+280*a2*a6*a7^2"
       "+80*a6^2*a7^2-90*a7^3-8*a7^4)",
}

LAMBDA4 = {
    1: "1/12*(-16-10*a2^2-9*a3+4*a2*a6-16*a6^2)",
    2: "1/108*(-256+280*a2^2+140*a2^4-189*a2*a4+896*a2*a6+140*a2^3*a6-162*a4*a6-512*a6^2"
       "+72*a2^2*a6^2+896*a2*a6^3-256*a6^4)",
    3: "1/25920*(32768+6259328*a2^2-7443240*a2^4-3637620*a2^6+226800*a2*a4+4896927*a2^3*a4"
       "-20412*a4^2+993280*a2*a6-25316928*a2^3*a6-4553220*a2^5*a6+284256*a4*a6"
       "+5352966*a2^2*a4*a6+32768*a6^2+6009216*a2^2*a6^2-3151896*a2^4*a6^2+1432512*a2*a4*a6^2"
       "+1001472*a2*a6^3-24025728*a2^3*a6^3+495360*a4*a6^3)",
}

# resultant of the reduced tau_2, tau_3 (Lambda4) in a6, restricted to a4 = 0
LAMBDA4_R1213_A4_0 = (
    "-1/1452826833750*a2^6*(1+a2^2)*(16+9*a2^2)*(2199023255552+3148960642367488*a2^2"
    "+48607541078261760*a2^4+264426711058227200*a2^6+692618123639590400*a2^8"
    "+983111352623484000*a2^10+784228248389171250*a2^12+294029898225170625*a2^14)"
)

LAMBDA1_POINT = {
    "a3": "-1.6657772441340260275382933375282366149192053853441",
    "a7": "-4.1967363822359183641439548974671095385907064222453",
    "a2": "-2.1822951200460674220108297255909871925482447960032",
}
LAMBDA1_TAU4 = "-29.95956914787823376077394571175254368388533110"
LAMBDA1_DET = "-303.622391170237307523268535764275295357683185"
LAMBDA2_TAU5 = "-0.009131827261973434519460359182840789927726"
LAMBDA2_DET = "-0.36143871856336911594092041376646558130041029"
LAMBDA3_TAU5 = "-455.788157320391380470485440367876484572373"
LAMBDA3_DET = "793811.91919002470497313053176662032132480"

"""Riemann-Siegel correction polynomials G_0..G_{K-1} in p = 1 - 2 frac(a).

Generated by tools/gen_rs_coeffs.py; do not edit by hand.
Each entry is a tuple of (real, imag) Taylor coefficients, ascending powers.
"""

RS_POLYS = (
    (
        (1.9134171618254488586e-1, -2.4516701493090414634e-1),
        (0.0, 0.0),
        (2.1862023403876022468e-1, -3.6933834884962952589e-2),
        (0.0, 0.0),
        (6.6188287740171761662e-2, 6.353439385614602931e-2),
        (0.0, 0.0),
        (-6.8025130238370943275e-3, 2.722391266357006742e-2),
        (0.0, 0.0),
        (-6.783810985051790444e-3, 1.3857608771066520102e-3),
        (0.0, 0.0),
        (-8.1186266157223264143e-4, -1.1894494461013780135e-3),
        (0.0, 0.0),
        (1.4852676866689845392e-4, -2.126982019289332378e-4),
        (0.0, 0.0),
        (3.971650439760734794e-5, 1.1171327401990151447e-5),
        (0.0, 0.0),
        (2.3278062307252252519e-7, 5.8728583986520696713e-6),
        (0.0, 0.0),
        (-7.163625815477552877e-7, 2.4982125529235178852e-7),
        (0.0, 0.0),
        (-5.1774235561564730375e-8, -7.3087003051015518753e-8),
        (0.0, 0.0),
        (6.1789635419308690281e-9, -7.5367914481640208033e-9),
        (0.0, 0.0),
        (8.9405419289774524928e-10, 4.1044257973312285519e-10),
        (0.0, 0.0),
        (-1.6957071949635179535e-11, 9.1065595502940845218e-11),
        (0.0, 0.0),
        (-8.1633169512829525507e-12, 4.3480990952496188777e-13),
        (0.0, 0.0),
        (-1.8925546592706101914e-13, -6.5209132615401300058e-13),
        (0.0, 0.0),
        (4.6637116296008624228e-14, -2.5746988391948218861e-14),
        (0.0, 0.0),
        (2.6109215079890684277e-15, 2.9783351960862872263e-15),
        (0.0, 0.0),
        (-1.6753365363721318948e-16, 2.2417569641965170902e-16),
        (0.0, 0.0),
        (-1.706213261405863247e-17, -7.993661378773456515e-18),
        (0.0, 0.0),
        (2.8756016707161995802e-19, -1.176894351646754471e-18),
        (0.0, 0.0),
        (7.4476506816057527274e-20, 3.4241415699579820318e-21),
        (0.0, 0.0),
        (6.2826863585107084267e-22, 4.3544324656780058873e-21),
        (0.0, 0.0),
        (-2.3606476250717128345e-22, 8.0426770108750665225e-23),
    ),
    (
        (0.0, 0.0),
        (1.3412551314187673515e-2, 1.287475997500637694e-2),
        (0.0, 0.0),
        (-6.8923867131759265249e-3, 2.7583590544485476247e-2),
        (0.0, 0.0),
        (-1.9245625241117541114e-2, 3.9313941047833242671e-3),
        (0.0, 0.0),
        (-4.935533149531038236e-3, -7.2309855457028798825e-3),
        (0.0, 0.0),
        (1.6553798804292021665e-3, -2.3705916935840135259e-3),
        (0.0, 0.0),
        (7.3239042889770754125e-4, 2.0600436497108181286e-4),
        (0.0, 0.0),
        (6.6039703124384818376e-6, 1.6661259000827618248e-4),
        (0.0, 0.0),
        (-2.9613743509235706616e-5, 1.0327371596376174759e-5),
        (0.0, 0.0),
        (-2.9901212926867242939e-6, -4.2209991450600252924e-6),
        (0.0, 0.0),
        (4.8206612280849131763e-7, -5.8800020540293924313e-7),
        (0.0, 0.0),
        (9.16736686135720588e-8, 4.2085566331723899191e-8),
        (0.0, 0.0),
        (-2.2335437813589167998e-9, 1.1994936103088013513e-8),
        (0.0, 0.0),
        (-1.3548175410886371608e-9, 7.2162834786293599177e-11),
        (0.0, 0.0),
        (-3.8926443271579255231e-11, -1.3412344996791744307e-10),
        (0.0, 0.0),
        (1.1718813005446844266e-11, -6.4696140409623564001e-12),
        (0.0, 0.0),
        (7.9150863949937608211e-13, 9.0289119447448157868e-13),
        (0.0, 0.0),
        (-6.0599707868618956233e-14, 8.1088076451151639495e-14),
        (0.0, 0.0),
        (-7.2918905805541535088e-15, -3.4162730668257476531e-15),
        (0.0, 0.0),
        (1.4393152629065958752e-16, -5.890669839303044295e-16),
        (0.0, 0.0),
        (4.3314314510618620613e-17, 1.9914245609874131686e-18),
        (0.0, 0.0),
        (4.2153613635685206358e-19, 2.9216015775198733524e-18),
        (0.0, 0.0),
        (-1.8154036115486731001e-19, 6.1850420778571455215e-20),
        (0.0, 0.0),
        (-5.8133491064191483597e-21, -1.0404344912932293703e-20),
        (0.0, 0.0),
        (5.487743355763765908e-22, -4.5018988314861068339e-22),
    ),
    (
        (1.7813642837020445905e-3, -4.0350905490072539603e-4),
        (0.0, 0.0),
        (3.2270369626470866949e-5, 5.0989835235474520401e-3),
        (0.0, 0.0),
        (-5.4573077716448328171e-3, -1.4582442565123619368e-3),
        (0.0, 0.0),
        (1.2067899599521811954e-3, -4.5300347369864321114e-3),
        (0.0, 0.0),
        (2.6029135105464751894e-3, 2.0558337838413081511e-4),
        (0.0, 0.0),
        (1.6805182957052186584e-4, 1.0319165540237859445e-3),
        (0.0, 0.0),
        (-2.9623767075319055426e-4, 1.3140869567210608442e-4),
        (0.0, 0.0),
        (-5.1112821656826689907e-5, -6.3911041680444982102e-5),
        (0.0, 0.0),
        (1.0463668909417715823e-5, -1.3949174696837558796e-5),
        (0.0, 0.0),
        (2.9646610858747096478e-6, 1.2443332979123743078e-6),
        (0.0, 0.0),
        (-8.2361528433250995631e-8, 5.1621394408785656069e-7),
        (0.0, 0.0),
        (-7.5830988454995664895e-8, 5.6184311589760604722e-9),
        (0.0, 0.0),
        (-2.9525409331570857339e-9, -9.5654787152722563299e-9),
        (0.0, 0.0),
        (1.0458776917170323678e-9, -5.9666958268987568462e-10),
        (0.0, 0.0),
        (8.907968962784521855e-11, 9.9237377512871859548e-11),
        (0.0, 0.0),
        (-8.0841983851332645535e-12, 1.1045429172184174034e-11),
        (0.0, 0.0),
        (-1.1904334948432205397e-12, -5.4536605797856052764e-13),
        (0.0, 0.0),
        (2.7001201827059676715e-14, -1.1415799221636053475e-13),
        (0.0, 0.0),
        (9.8758144041140546298e-15, 3.9038513008948489205e-16),
        (0.0, 0.0),
        (1.1663783885770828726e-16, 7.7732389769768613948e-16),
        (0.0, 0.0),
        (-5.5941490311772932547e-17, 1.9370900371446560344e-17),
        (0.0, 0.0),
        (-2.0819933909198689014e-18, -3.6877809584272500958e-18),
        (0.0, 0.0),
        (2.2231849357816232821e-19, -1.8385464216515174646e-19),
        (0.0, 0.0),
        (1.4273324065110649839e-20, 1.2173722966827896853e-20),
        (0.0, 0.0),
        (-5.9570094261557210987e-22, 1.0034497350659434853e-21),
    ),
    (
        (0.0, 0.0),
        (7.1254724725856078e-4, 9.6549579157267472453e-4),
        (0.0, 0.0),
        (-1.7806478852026608471e-3, -7.9358872118971208999e-5),
        (0.0, 0.0),
        (6.7819437940396096398e-4, -1.6819205748642316252e-3),
        (0.0, 0.0),
        (1.1087570571689089477e-3, 7.680221990698691023e-4),
        (0.0, 0.0),
        (-4.852852371354715928e-4, 6.2864280359635754703e-4),
        (0.0, 0.0),
        (-2.9981886851102072554e-4, -1.9406496995458869357e-4),
        (0.0, 0.0),
        (5.1196733460573953209e-5, -1.1403567901207453535e-4),
        (0.0, 0.0),
        (3.4362910001472255429e-5, 8.3001956771611924966e-6),
        (0.0, 0.0),
        (-3.1326402455032505777e-7, 8.3454512715229133817e-6),
        (0.0, 0.0),
        (-1.6677795743539095554e-6, 2.8220104237074331108e-7),
        (0.0, 0.0),
        (-1.0945690122228966146e-7, -2.7898172131725664922e-7),
        (0.0, 0.0),
        (3.9494193173675761503e-8, -2.5813853712731208125e-8),
        (0.0, 0.0),
        (4.7075818129781261259e-9, 4.7451998901605064639e-9),
        (0.0, 0.0),
        (-4.7895052742015177701e-10, 7.1526829231924970525e-10),
        (0.0, 0.0),
        (-9.3837138747655728377e-11, -3.9031714126663078222e-11),
        (0.0, 0.0),
        (2.2219125812590904871e-12, -1.0853284325034109964e-11),
        (0.0, 0.0),
        (1.1216057912848887936e-12, 1.4914830287821847359e-14),
        (0.0, 0.0),
        (1.8127106896477530392e-14, 1.0448357673042147686e-13),
        (0.0, 0.0),
        (-8.8218579612921395961e-15, 3.254277066705783234e-15),
        (0.0, 0.0),
        (-3.9803165931719980965e-16, -6.767291555539602964e-16),
        (0.0, 0.0),
        (4.71079446890486073e-17, -4.0223508704222879055e-17),
        (0.0, 0.0),
        (3.5667570064556460648e-18, 2.9564088686955299686e-18),
        (0.0, 0.0),
        (-1.6453002720528384502e-19, 2.8530016802306478812e-19),
        (0.0, 0.0),
        (-2.090514458168465196e-20, -7.7959026285870483467e-21),
        (0.0, 0.0),
        (2.7761479569366198705e-22, -1.4167258847296968623e-21),
    ),
    (
        (2.3213083093786272989e-4, -1.5153561052014304865e-6),
        (0.0, 0.0),
        (-4.8472176480742135392e-4, 2.4639428993014853003e-4),
        (0.0, 0.0),
        (1.1575298032413675007e-4, -6.5953766816882965422e-4),
        (0.0, 0.0),
        (4.9909655096131176985e-4, 3.9859019441197999501e-4),
        (0.0, 0.0),
        (-3.8224868581314369074e-4, 2.5109535543881982699e-4),
        (0.0, 0.0),
        (-9.8409342253283745617e-5, -2.4291117297347295053e-4),
        (0.0, 0.0),
        (1.1649798440005338387e-4, -3.837324969740021743e-5),
        (0.0, 0.0),
        (1.6089378815390890495e-5, 4.3465066323322587994e-5),
        (0.0, 0.0),
        (-1.2835781648228913563e-5, 6.276911918962637297e-6),
        (0.0, 0.0),
        (-2.0496102865879454704e-6, -3.0502463374689423199e-6),
        (0.0, 0.0),
        (5.9076702243288089715e-7, -5.4914287624479274367e-7),
        (0.0, 0.0),
        (1.2230147026774986845e-7, 9.3640790454669279357e-8),
        (0.0, 0.0),
        (-1.1989623994461661962e-8, 2.3077840267495902878e-8),
        (0.0, 0.0),
        (-3.7545855907621282483e-9, -1.1704963181808614283e-9),
        (0.0, 0.0),
        (6.6890396356714974594e-11, -5.3425769726458255321e-10),
        (0.0, 0.0),
        (6.7239756369355138638e-11, -3.5392326295918557776e-12),
        (0.0, 0.0),
        (1.7550769920823134073e-12, 7.5477880302338824982e-12),
        (0.0, 0.0),
        (-7.5995572918194832636e-13, 3.2365339139719568443e-13),
        (0.0, 0.0),
        (-4.4575794917273054465e-14, -6.8822127549290679884e-14),
        (0.0, 0.0),
        (5.6005228834212401933e-15, -5.1622899688622915961e-15),
        (0.0, 0.0),
        (5.258648967128468102e-16, 4.0679318668266518916e-16),
        (0.0, 0.0),
        (-2.5905503637346077797e-17, 4.8213464317212681459e-17),
        (0.0, 0.0),
        (-4.0335470394861526419e-18, -1.3815309586359114942e-18),
        (0.0, 0.0),
        (5.3081386109040728836e-20, -3.1069749500807565586e-19),
        (0.0, 0.0),
        (2.2171730501391000468e-20, 2.3689732792120969716e-22),
        (0.0, 0.0),
        (2.1591949411403292763e-22, 1.4720015337995303087e-21),
    ),
    (
        (0.0, 0.0),
        (-5.3441979059010776282e-5, 1.4540992123631925088e-4),
        (0.0, 0.0),
        (-6.9558812897689661996e-5, -2.1825016743336644245e-4),
        (0.0, 0.0),
        (2.477327160531716119e-4, 1.1821820234778635798e-4),
        (0.0, 0.0),
        (-2.0359399233199761194e-4, 1.2596370835033679302e-4),
        (0.0, 0.0),
        (-2.3012743761677328446e-5, -1.647124934539842985e-4),
        (0.0, 0.0),
        (9.2277210785032496877e-5, 1.3972513222869843114e-5),
        (0.0, 0.0),
        (-1.4130509006050585981e-5, 4.1347385250256502925e-5),
        (0.0, 0.0),
        (-1.5757207814260138679e-5, -6.7043198294841202813e-6),
        (0.0, 0.0),
        (2.1365177615821920891e-6, -5.1742176968267668789e-6),
        (0.0, 0.0),
        (1.4588882420620322737e-6, 4.9039131151896213194e-7),
        (0.0, 0.0),
        (-7.9193448346263290303e-8, 3.5262018650397348327e-7),
        (0.0, 0.0),
        (-7.3346281960787756092e-8, -6.9906215091080169492e-9),
        (0.0, 0.0),
        (-5.9428158794622187243e-10, -1.322398611352466195e-8),
        (0.0, 0.0),
        (2.0833336590660434255e-9, -4.0823387166982643464e-10),
        (0.0, 0.0),
        (1.0456970962061252032e-10, 2.8889131107514986959e-10),
        (0.0, 0.0),
        (-3.5455757620941999501e-11, 1.9556030456835126365e-11),
        (0.0, 0.0),
        (-3.0114516018191741032e-12, -3.8624270290364181994e-12),
        (0.0, 0.0),
        (3.7305408124592500363e-13, -4.0047814292913730027e-13),
        (0.0, 0.0),
        (4.7172356956900954358e-14, 3.1695263345829898012e-14),
        (0.0, 0.0),
        (-2.3174146545079345629e-15, 4.999812450075595383e-15),
        (0.0, 0.0),
        (-4.8201366309921683194e-16, -1.3730181791801103179e-16),
        (0.0, 0.0),
        (5.2345030722013972401e-18, -4.2596473181289633545e-17),
        (0.0, 0.0),
        (3.4703082058646251114e-18, -1.0938892576806967948e-19),
        (0.0, 0.0),
        (4.8639164406991115189e-20, 2.617118479060074028e-19),
        (0.0, 0.0),
        (-1.8319633572258995837e-20, 6.3650449885924157605e-21),
        (0.0, 0.0),
        (-6.2565077980107824924e-22, -1.1918349496050147165e-21),
    ),
    (
        (1.5650604360682182831e-5, 2.0027152597093384461e-5),
        (0.0, 0.0),
        (-6.027655660727052164e-5, -3.7475023600049358094e-5),
        (0.0, 0.0),
        (1.0719729655804711852e-4, -3.4775265724601581821e-6),
        (0.0, 0.0),
        (-8.1633703551479958649e-5, 8.1348522696006912374e-5),
        (0.0, 0.0),
        (-1.4697231446842001344e-5, -9.3954283882624356949e-5),
        (0.0, 0.0),
        (5.9618756337066202373e-5, 2.1058587442919392556e-5),
        (0.0, 0.0),
        (-2.2705638386803981982e-5, 2.6463295109301828473e-5),
        (0.0, 0.0),
        (-9.1314925624775760754e-6, -1.3384962231477955622e-5),
        (0.0, 0.0),
        (5.8290295310703291375e-6, -2.7062422386441621269e-6),
        (0.0, 0.0),
        (7.6570645287397399274e-7, 2.0351274646407853531e-6),
        (0.0, 0.0),
        (-5.8841342559557672061e-7, 2.1828972640087101702e-7),
        (0.0, 0.0),
        (-6.0696999393574469876e-8, -1.4332772051249105717e-7),
        (0.0, 0.0),
        (2.9766960863319810881e-8, -1.5494889893362102835e-8),
        (0.0, 0.0),
        (3.5021237113344545584e-9, 5.3204884327314791155e-9),
        (0.0, 0.0),
        (-8.240255793776757751e-10, 6.9357124022808738225e-10),
        (0.0, 0.0),
        (-1.207041723631625655e-10, -1.1096519404863125516e-10),
        (0.0, 0.0),
        (1.2967713163686896488e-11, -1.8602082442770931978e-11),
        (0.0, 0.0),
        (2.5607169403035784696e-12, 1.299783409935244681e-12),
        (0.0, 0.0),
        (-1.079361188639986178e-13, 3.1743246533765408983e-13),
        (0.0, 0.0),
        (-3.5688253410694271222e-14, -6.6470221776742427033e-15),
        (0.0, 0.0),
        (1.4527649195145416195e-16, -3.6609479422082214785e-15),
        (0.0, 0.0),
        (3.4433554535196935792e-16, -3.6315929098917816784e-17),
        (0.0, 0.0),
        (7.5998776859670144071e-18, 2.9808003621880548777e-17),
        (0.0, 0.0),
        (-2.3811291876020107033e-18, 9.8912328092742090475e-19),
        (0.0, 0.0),
        (-1.0464603670533404759e-19, -1.7574764043627683874e-19),
        (0.0, 0.0),
        (1.1980354896714566916e-20, -9.6781770662600663905e-21),
        (0.0, 0.0),
        (8.0752055687843535178e-22, 7.5208308550327562792e-22),
    ),
    (
        (0.0, 0.0),
        (-1.5982143791470749167e-5, 8.6295385059171205678e-6),
        (0.0, 0.0),
        (2.7320532827602089823e-5, -2.5043476802222686308e-5),
        (0.0, 0.0),
        (-1.6522917874011328518e-5, 4.8067987027143251795e-5),
        (0.0, 0.0),
        (-1.9254376310180058533e-5, -4.6191837097419801058e-5),
        (0.0, 0.0),
        (3.7390260111053807753e-5, 1.1325833405606762406e-5),
        (0.0, 0.0),
        (-1.8772564792217981561e-5, 1.6484797993306504096e-5),
        (0.0, 0.0),
        (-3.741182676092424209e-6, -1.2943355837754442144e-5),
        (0.0, 0.0),
        (6.1953502318442686721e-6, 3.214198766710692069e-7),
        (0.0, 0.0),
        (-7.051117235101051112e-7, 2.361489252168498052e-6),
        (0.0, 0.0),
        (-7.6745785688953839027e-7, -3.620048188619255764e-7),
        (0.0, 0.0),
        (1.2463047294725508912e-7, -2.2019195401095150849e-7),
        (0.0, 0.0),
        (5.6495841000798793198e-8, 3.3043313670328897485e-8),
        (0.0, 0.0),
        (-7.0765111983779697775e-9, 1.2980455523775445028e-8),
        (0.0, 0.0),
        (-2.6664673812893527068e-9, -1.2470262688779584671e-9),
        (0.0, 0.0),
        (1.8067151383526763986e-10, -4.8961654167950539365e-10),
        (0.0, 0.0),
        (8.0522203325355990752e-11, 2.0892200110250790613e-11),
        (0.0, 0.0),
        (-1.7154994128692401456e-12, 1.1903848406702483158e-11),
        (0.0, 0.0),
        (-1.5888400416905751416e-12, -3.9023639902011610916e-14),
        (0.0, 0.0),
        (-1.9207044191842176497e-14, -1.9232906025731217738e-13),
        (0.0, 0.0),
        (2.1201839407852335169e-14, -4.9078294597222860879e-15),
        (0.0, 0.0),
        (7.9914170400408447383e-16, 2.1357909709115987506e-15),
        (0.0, 0.0),
        (-1.9709364537000957478e-16, 1.0521043251697894072e-16),
        (0.0, 0.0),
        (-1.2001183644837497562e-17, -1.668089221449151826e-17),
        (0.0, 0.0),
        (1.2938931908889132447e-18, -1.2237517231869869028e-18),
        (0.0, 0.0),
        (1.1352546362978009289e-19, 9.1655785076519099606e-20),
        (0.0, 0.0),
        (-5.8783878691405830757e-21, 9.6896675615308694314e-21),
        (0.0, 0.0),
        (-7.6690807401523266904e-22, -3.3492524696081511309e-22),
    ),
    (
        (1.2786903048532079399e-6, 3.1647846086996180202e-6),
        (0.0, 0.0),
        (-2.1126109327895225179e-6, -1.1167643757930307734e-5),
        (0.0, 0.0),
        (6.7699458918781528379e-6, 1.8916392605691048251e-5),
        (0.0, 0.0),
        (-1.8063519163536498714e-5, -1.6243478753178643362e-5),
        (0.0, 0.0),
        (2.2251001700748944935e-5, 9.7633683889293767682e-7),
        (0.0, 0.0),
        (-1.1607554764297897131e-5, 1.1676305843793318356e-5),
        (0.0, 0.0),
        (-1.8068192383953176103e-6, -1.000783848032559969e-5),
        (0.0, 0.0),
        (5.0840139976127850863e-6, 1.6776211742051618036e-6),
        (0.0, 0.0),
        (-1.5935764753166417533e-6, 1.8415531208629627323e-6),
        (0.0, 0.0),
        (-5.0921521247869635167e-7, -8.1944715656457861729e-7),
        (0.0, 0.0),
        (3.1559682831686874708e-7, -1.1160891683785816414e-7),
        (0.0, 0.0),
        (2.0368766594677837614e-8, 9.9791773009311297869e-8),
        (0.0, 0.0),
        (-2.6944646762272536885e-8, 3.4893293324099393155e-9),
        (0.0, 0.0),
        (-6.9005460480741479018e-10, -6.3342738457478069408e-9),
        (0.0, 0.0),
        (1.3107626782561091958e-9, -1.683366563883706762e-10),
        (0.0, 0.0),
        (4.2793519644093488296e-11, 2.4053753585407322097e-10),
        (0.0, 0.0),
        (-3.9379410669404651925e-11, 9.8755942206517353788e-12),
        (0.0, 0.0),
        (-1.9864853490227310429e-12, -5.7815935374125457992e-12),
        (0.0, 0.0),
        (7.6470096741795703256e-13, -3.485137290704763606e-13),
        (0.0, 0.0),
        (5.3920606902346308479e-14, 9.1457284453179849143e-14),
        (0.0, 0.0),
        (-9.9166144084808128852e-15, 7.4451871720364564106e-15),
        (0.0, 0.0),
        (-9.2719196594027784966e-16, -9.7585893352453372333e-16),
        (0.0, 0.0),
        (8.7043376888083085151e-17, -1.0507387607328922278e-16),
        (0.0, 0.0),
        (1.0915884528436738893e-17, 7.001294380472766437e-18),
        (0.0, 0.0),
        (-5.015444545131589855e-19, 1.0459981568693279541e-18),
        (0.0, 0.0),
        (-9.2925816614935061978e-20, -3.1083327516894982748e-20),
        (0.0, 0.0),
        (1.5405392423660020277e-21, -7.6865581364387367536e-21),
        (0.0, 0.0),
        (5.9409777189103922718e-22, 4.3115057767747105298e-23),
    ),
    (
        (0.0, 0.0),
        (-3.4087985957646176275e-6, -1.1189497906198667795e-8),
        (0.0, 0.0),
        (6.6888469135347883164e-6, 2.1278930547306754338e-6),
        (0.0, 0.0),
        (-1.0724812009365527271e-5, -9.6507049539044891079e-7),
        (0.0, 0.0),
        (1.0846776824336260896e-5, -4.5262306056107003251e-6),
        (0.0, 0.0),
        (-5.0486123469364698259e-6, 8.7078862140660579509e-6),
        (0.0, 0.0),
        (-1.8639264298105770401e-6, -6.8454299001813812407e-6),
        (0.0, 0.0),
        (3.9162623642424060194e-6, 1.6144915409035795647e-6),
        (0.0, 0.0),
        (-1.7565790931394097221e-6, 1.2873306321049941401e-6),
        (0.0, 0.0),
        (-1.788573565910726976e-7, -9.5977678281723811117e-7),
        (0.0, 0.0),
        (3.7881202992443670056e-7, 6.6084585742609150257e-8),
        (0.0, 0.0),
        (-5.7686287803854361177e-8, 1.2064985184892069275e-7),
        (0.0, 0.0),
        (-3.2962690626223799923e-8, -2.4665445121878633271e-8),
        (0.0, 0.0),
        (7.8130835732964471649e-9, -8.0535220748628693076e-9),
        (0.0, 0.0),
        (1.8074971982529943555e-9, 2.0181399379581523553e-9),
        (0.0, 0.0),
        (-4.4228182756127242158e-10, 3.7726612506304526337e-10),
        (0.0, 0.0),
        (-7.3285966093725663295e-11, -8.3980491788572807167e-11),
        (0.0, 0.0),
        (1.399380957683280441e-11, -1.3183433969421198696e-11),
        (0.0, 0.0),
        (2.1841928930854779477e-12, 2.0632402082658251369e-12),
        (0.0, 0.0),
        (-2.7050693101334369857e-13, 3.3216336688971636931e-13),
        (0.0, 0.0),
        (-4.6329456377545093951e-14, -3.1592602429789046354e-14),
        (0.0, 0.0),
        (3.2786463070370026927e-15, -5.9334260091237901167e-15),
        (0.0, 0.0),
        (6.9939038943256577804e-16, 2.9944581988959248915e-16),
        (0.0, 0.0),
        (-2.3476574714620113625e-17, 7.6099637664289070054e-17),
        (0.0, 0.0),
        (-7.6675523226746424863e-18, -1.4755735224784541929e-18),
        (0.0, 0.0),
        (5.6178748953538008361e-20, -7.1757974244029015404e-19),
        (0.0, 0.0),
        (6.255272846882993232e-20, -2.2531827340199030471e-21),
        (0.0, 0.0),
        (7.7844541452086075164e-22, 5.0916441861620473853e-21),
        (0.0, 0.0),
        (-3.8778646130761550691e-22, 1.0671323065305044052e-22),
    ),
    (
        (-9.9021817908625844273e-8, 7.8363989198802073957e-7),
        (0.0, 0.0),
        (1.3363348046907868638e-6, -1.7788483108338941778e-6),
        (0.0, 0.0),
        (-3.1144634757218668396e-6, 2.9452892544007820967e-6),
        (0.0, 0.0),
        (3.0033375142259044462e-6, -4.8774647404213913671e-6),
        (0.0, 0.0),
        (-5.1771280209377366277e-7, 5.6976617275414535097e-6),
        (0.0, 0.0),
        (-2.3244851363577746874e-6, -3.9827014772731092891e-6),
        (0.0, 0.0),
        (2.9852386380454905749e-6, 8.8243590318572126229e-7),
        (0.0, 0.0),
        (-1.4986749760586026969e-6, 9.9420851257694117748e-7),
        (0.0, 0.0),
        (5.299877928453087102e-9, -9.0321642397294924907e-7),
        (0.0, 0.0),
        (3.4956313245192180387e-7, 1.9150154936101472572e-7),
        (0.0, 0.0),
        (-1.2269513229748214323e-7, 9.586421426989473672e-8),
        (0.0, 0.0),
        (-1.7993089889444839212e-8, -5.1010558807757047456e-8),
        (0.0, 0.0),
        (1.6687810025823339708e-8, -1.5202300195148836041e-9),
        (0.0, 0.0),
        (-4.0812960835408491673e-10, 4.6152219632197345285e-9),
        (0.0, 0.0),
        (-1.1191919694148908729e-9, -2.3441152277462187854e-10),
        (0.0, 0.0),
        (6.8220048487939818909e-11, -2.4282335284772785497e-10),
        (0.0, 0.0),
        (4.765576080176379164e-11, 1.4766650649241737494e-11),
        (0.0, 0.0),
        (-2.5868951215030632622e-12, 8.5100005035604764329e-12),
        (0.0, 0.0),
        (-1.3874463771806952044e-12, -3.7655953674405115764e-13),
        (0.0, 0.0),
        (4.5410086181553778853e-14, -2.0704858259537281511e-13),
        (0.0, 0.0),
        (2.8349055167469573091e-14, 4.3459307240264358713e-15),
        (0.0, 0.0),
        (-2.7543188701583261073e-16, 3.5703416189511829798e-15),
        (0.0, 0.0),
        (-4.1469807956218164244e-16, 2.8735231709272975121e-18),
        (0.0, 0.0),
        (-4.3653391497826799869e-18, -4.4540714281380030984e-17),
        (0.0, 0.0),
        (4.43492711338663706e-18, -8.7041760481454134154e-19),
        (0.0, 0.0),
        (1.2426395607370969334e-19, 4.1031383765402854588e-19),
        (0.0, 0.0),
        (-3.534148692996469095e-20, 1.4841529267515219076e-20),
        (0.0, 0.0),
        (-1.5637429573487630934e-21, -2.8380271138073136954e-21),
        (0.0, 0.0),
        (2.1264153716354917954e-22, -1.491153342906259175e-22),
    ),
    (
        (0.0, 0.0),
        (-5.2803036343466463375e-7, -4.0478922879719516126e-7),
        (0.0, 0.0),
        (3.892680114054471046e-7, 1.4416993347463441475e-6),
        (0.0, 0.0),
        (-6.5140909157837709571e-7, -2.4746605583624779291e-6),
        (0.0, 0.0),
        (1.4962892241847249988e-6, 2.6255142211270803629e-6),
        (0.0, 0.0),
        (-2.2892580508672591428e-6, -1.610431846584027672e-6),
        (0.0, 0.0),
        (2.1385144617312370824e-6, 4.2873219188158350608e-8),
        (0.0, 0.0),
        (-1.0572908289754749011e-6, 8.9615153816627111405e-7),
        (0.0, 0.0),
        (2.3669021859230090536e-8, -7.7565991256261443845e-7),
        (0.0, 0.0),
        (3.0042790290366375882e-7, 2.3395050691652950896e-7),
        (0.0, 0.0),
        (-1.540186517059420597e-7, 6.0062213357739307537e-8),
        (0.0, 0.0),
        (5.0334054910251834546e-9, -6.3746305161413775693e-8),
        (0.0, 0.0),
        (1.9942893882475749383e-8, 9.6024374593039908954e-9),
        (0.0, 0.0),
        (-4.6550239687750065081e-9, 5.0592279505344448115e-9),
        (0.0, 0.0),
        (-1.0847913969367505698e-9, -1.5824784143046732069e-9),
        (0.0, 0.0),
        (4.3591278630363738472e-10, -2.037045063895656044e-10),
        (0.0, 0.0),
        (3.4892340245881780216e-11, 1.0271700945552804579e-10),
        (0.0, 0.0),
        (-2.1270115639434688379e-11, 5.7245762628253061438e-12),
        (0.0, 0.0),
        (-9.4057699747618000758e-13, -3.9308527539571564303e-12),
        (0.0, 0.0),
        (6.5470421969941229239e-13, -1.5731426711153442263e-13),
        (0.0, 0.0),
        (2.6276584743726919025e-14, 9.8948030373561169712e-14),
        (0.0, 0.0),
        (-1.364018459759050997e-14, 4.237664144325839947e-15),
        (0.0, 0.0),
        (-6.4224446615742611234e-16, -1.7222676201776642967e-15),
        (0.0, 0.0),
        (1.998770344433405773e-16, -9.0153930132920191692e-17),
        (0.0, 0.0),
        (1.1661372137480440147e-17, 2.1382849830550049213e-17),
        (0.0, 0.0),
        (-2.1135243165861536477e-18, 1.3900841471969465453e-18),
        (0.0, 0.0),
        (-1.5310054906534303951e-19, -1.9332377197561520672e-19),
        (0.0, 0.0),
        (1.6376203488200774096e-20, -1.5634838893660442418e-20),
        (0.0, 0.0),
        (1.4860209366480452682e-21, 1.2840255920304884932e-21),
        (0.0, 0.0),
        (-9.2971358676776596405e-23, 1.3193306718149571561e-22),
    ),
    (
        (-7.2699933144841951971e-8, 1.4063675572023333348e-7),
        (0.0, 0.0),
        (4.2557054673274808827e-7, -5.0997732680157500438e-8),
        (0.0, 0.0),
        (-9.7872243346838312608e-7, -3.2025688809252395179e-7),
        (0.0, 0.0),
        (1.4275403698067745274e-6, 3.9293539321958033554e-7),
        (0.0, 0.0),
        (-1.5853927830048854156e-6, -3.0941941319008067402e-8),
        (0.0, 0.0),
        (1.2665467018763587008e-6, -5.4187373945371416218e-7),
        (0.0, 0.0),
        (-5.6269571894829922933e-7, 8.2938528050888449136e-7),
        (0.0, 0.0),
        (-6.1626528199407624288e-8, -6.2167085430056544076e-7),
        (0.0, 0.0),
        (2.6668259332996147614e-7, 2.1003221402426158519e-7),
        (0.0, 0.0),
        (-1.5824391899515027616e-7, 3.8235589091049004285e-8),
        (0.0, 0.0),
        (2.3062992595899619183e-8, -6.5579397692429039355e-8),
        (0.0, 0.0),
        (1.797421527542082161e-8, 1.9603060728444479896e-8),
        (0.0, 0.0),
        (-8.6601508187560798111e-9, 2.9721092922441822457e-9),
        (0.0, 0.0),
        (2.0180658450126916932e-11, -2.8437202922103523792e-9),
        (0.0, 0.0),
        (7.6779095844171209563e-10, 2.1769625208707289507e-10),
        (0.0, 0.0),
        (-9.3964036231986457616e-11, 1.7931831209691853312e-10),
        (0.0, 0.0),
        (-3.7431584022960692296e-11, -2.7463770015347843548e-11),
        (0.0, 0.0),
        (6.4593112866323062051e-12, -7.1456478236012212809e-12),
        (0.0, 0.0),
        (1.2667041925873279358e-12, 1.2955955156680823337e-12),
        (0.0, 0.0),
        (-2.2786640061694530809e-13, 2.1029180422901838087e-13),
        (0.0, 0.0),
        (-3.279339382350724667e-14, -3.5705454435590155133e-14),
        (0.0, 0.0),
        (5.0355506545565457651e-15, -4.8014478987011928364e-15),
        (0.0, 0.0),
        (6.5884483629912423572e-16, 6.4358733390074467814e-16),
        (0.0, 0.0),
        (-7.489472208624286891e-17, 8.4577919162441242073e-17),
        (0.0, 0.0),
        (-1.0147856817033245353e-17, -7.9586099622041654279e-18),
        (0.0, 0.0),
        (7.7310736320115469765e-19, -1.137950943898177434e-18),
        (0.0, 0.0),
        (1.1935508391043158283e-19, 6.8572434725004291691e-20),
        (0.0, 0.0),
        (-5.5279960788940803194e-21, 1.1724941873413088191e-20),
        (0.0, 0.0),
        (-1.080608646139911243e-21, -4.0070223476612361161e-22),
    ),
    (
        (0.0, 0.0),
        (-7.6531132917641721525e-8, -1.0870292265959546683e-7),
        (0.0, 0.0),
        (-2.1940755303890152132e-7, 2.7318796548799020305e-7),
        (0.0, 0.0),
        (5.1582379181237072562e-7, -4.2803293389137109054e-7),
        (0.0, 0.0),
        (-6.1805371518163543726e-7, 5.650530800814129229e-7),
        (0.0, 0.0),
        (4.6094721413353481581e-7, -6.9183348126746284049e-7),
        (0.0, 0.0),
        (-1.1953450880838266563e-7, 6.711459882216779986e-7),
        (0.0, 0.0),
        (-1.7301983464216437973e-7, -4.4077662119919802548e-7),
        (0.0, 0.0),
        (2.4591010015732586523e-7, 1.4317339172838767814e-7),
        (0.0, 0.0),
        (-1.4563316821322112021e-7, 3.6930274818218053723e-8),
        (0.0, 0.0),
        (3.067011135026447478e-8, -6.3437568493537835224e-8),
        (0.0, 0.0),
        (1.4464806167223241298e-8, 2.5812191097890987458e-8),
        (0.0, 0.0),
        (-1.1187440129901441739e-8, -1.7983859577945486288e-10),
        (0.0, 0.0),
        (1.7170147550194062553e-9, -3.4186684545053652229e-9),
        (0.0, 0.0),
        (7.8956313230851625827e-10, 8.8473777297145011118e-10),
        (0.0, 0.0),
        (-3.0476332763697228975e-10, 1.3599289606044815058e-10),
        (0.0, 0.0),
        (-1.4740501433818159312e-11, -8.4047855985551430861e-11),
        (0.0, 0.0),
        (1.9821821105286356357e-11, 3.0431479098156031474e-13),
        (0.0, 0.0),
        (-6.4120534982690588778e-13, 4.1363693512574582178e-12),
        (0.0, 0.0),
        (-7.793946915300662644e-13, -1.9808958892209453531e-13),
        (0.0, 0.0),
        (4.2682256574624883612e-14, -1.3428483320854333513e-13),
        (0.0, 0.0),
        (2.1321819634192001289e-14, 7.4671300269477591335e-15),
        (0.0, 0.0),
        (-1.1153616239836989438e-15, 3.1350865092797090776e-15),
        (0.0, 0.0),
        (-4.2819800044740006757e-16, -1.4532845918743422364e-16),
        (0.0, 0.0),
        (1.6650666359683083658e-17, -5.4445135859557588996e-17),
        (0.0, 0.0),
        (6.4561872968871906191e-18, 1.6733154635237346438e-18),
        (0.0, 0.0),
        (-1.4500037287852628457e-19, 7.1520917152167313093e-19),
        (0.0, 0.0),
        (-7.4143189363454272584e-20, -1.0297142177153776942e-20),
        (0.0, 0.0),
        (4.983852673169812176e-22, -7.2051817282974317083e-21),
        (0.0, 0.0),
        (6.5752136577963292667e-22, -3.6449570222585015604e-24),
    ),
)

//! Frozen series coefficients for the Riemann–Siegel remainder.

#![allow(clippy::excessive_precision)]

/// Even Taylor coefficients of
/// `F(z) = (e^{i pi (z^2 / 2 + 3/8)} - i sqrt(2) cos(pi z / 2)) / (2 cos(pi z))`,
/// entry `j` multiplying `z^{2j}`.
pub(super) const F_TAYLOR_EVEN: [(f64, f64); 70] = [
    (1.9134171618254489e-1, -2.4516701493090415e-1),
    (2.1862023403876022e-1, -3.6933834884962953e-2),
    (6.6188287740171762e-2, 6.3534393856146029e-2),
    (-6.8025130238370943e-3, 2.7223912663570067e-2),
    (-6.7838109850517904e-3, 1.385760877106652e-3),
    (-8.1186266157223264e-4, -1.189449446101378e-3),
    (1.4852676866689845e-4, -2.1269820192893324e-4),
    (3.9716504397607348e-5, 1.1171327401990151e-5),
    (2.3278062307252253e-7, 5.8728583986520697e-6),
    (-7.1636258154775529e-7, 2.4982125529235179e-7),
    (-5.177423556156473e-8, -7.3087003051015519e-8),
    (6.178963541930869e-9, -7.5367914481640208e-9),
    (8.9405419289774525e-10, 4.1044257973312286e-10),
    (-1.695707194963518e-11, 9.1065595502940845e-11),
    (-8.1633169512829526e-12, 4.3480990952496189e-13),
    (-1.8925546592706102e-13, -6.52091326154013e-13),
    (4.6637116296008624e-14, -2.5746988391948219e-14),
    (2.6109215079890684e-15, 2.9783351960862872e-15),
    (-1.6753365363721319e-16, 2.2417569641965171e-16),
    (-1.7062132614058632e-17, -7.9936613787734565e-18),
    (2.8756016707161996e-19, -1.1768943516467545e-18),
    (7.4476506816057527e-20, 3.424141569957982e-21),
    (6.2826863585107084e-22, 4.3544324656780059e-21),
    (-2.3606476250717128e-22, 8.0426770108750665e-23),
    (-6.63453468151981e-24, -1.187404814328495e-23),
    (5.5267199975607092e-25, -4.5338735224994205e-25),
    (2.7498231887637328e-26, 2.3622132419636894e-26),
    (-9.1156882511590131e-28, 1.524413235942887e-27),
    (-7.8447018688604401e-29, -3.0537676963256186e-29),
    (7.9198175441190058e-31, -3.7815907075540573e-30),
    (1.717310362718602e-31, 7.6366798425535924e-33),
    (8.5105167501585089e-34, 7.3723979435893409e-33),
    (-2.9975596524789084e-34, 8.3535607351450638e-35),
    (-5.2438413770472262e-36, -1.1548379716377025e-35),
    (4.2110675891746605e-37, -2.7493469328542347e-37),
    (1.2923519298859779e-38, 1.4488435963406571e-38),
    (-4.6738196874449926e-40, 5.6106598232391619e-40),
    (-2.2847096126218506e-41, -1.3966922082756918e-41),
    (3.7727986973826953e-43, -8.8058190314645544e-43),
    (3.2309079427925246e-44, 8.6892654803194889e-45),
    (-1.3941164374376022e-46, 1.1327617267509539e-45),
    (-3.8044723380433791e-47, 6.1213380938080643e-49),
    (-1.8900728501624485e-49, -1.225917996210053e-48),
    (3.7928135143376172e-50, -1.1246051243202504e-50),
    (5.0580143011982565e-52, 1.1266249089369789e-51),
    (-3.2101068362834722e-53, 1.986810051168017e-53),
    (-7.1532235569925485e-55, -8.7557610016909518e-55),
    (2.2776852002593257e-56, -2.4137455694352545e-56),
    (7.7271194299560299e-58, 5.6147413285932843e-58),
    (-1.2967071695908121e-59, 2.3642724913070932e-59),
    (-6.9474683693220933e-61, -2.7445014476696415e-61),
    (5.0651650973642017e-63, -1.9671118923381142e-62),
    (5.3788780226185879e-64, 6.9784570978638174e-65),
    (-1.0221163043442099e-67, 1.4226269983009644e-65),
    (-3.6430350752206549e-67, 4.1531896467280567e-68),
    (-2.1456725718765533e-69, -9.0373040803726138e-69),
    (2.1719539494564497e-70, -7.9683497944223006e-71),
    (2.5620535289583071e-72, 5.0549764272736041e-72),
    (-1.1381775247097441e-73, 7.5477467551106754e-74),
    (-2.0888774907914681e-75, -2.4748584419411761e-75),
    (5.1817543167910124e-77, -5.5037163641601473e-77),
    (1.3915550042959171e-78, 1.0398061225581512e-78),
    (-1.9842907674987158e-80, 3.3937106095167907e-80),
    (-8.0111652008246428e-82, -3.5522004061097718e-82),
    (5.8072152879421605e-84, -1.8349784443240837e-83),
    (4.0855109043042997e-85, 8.133019635897689e-86),
    (-7.7518371193060133e-88, 8.8529943361989686e-87),
    (-1.8687154219476383e-88, 3.925697261687537e-90),
    (-4.9694824024479171e-91, -3.8445626505980938e-90),
    (7.71111857096867e-92, -1.8487287072971387e-92),
];

/// `d[k][l] / (pi^{2k - l} 2^l)`; the full weight of `F^{(3k - 2l)}` is this
/// times `(-i)^l`.
pub(super) const RS_WEIGHTS: [&[f64]; 15] = [
    &[1.0],
    &[8.4434319701948143e-3, 0.0],
    &[3.5645771717653942e-5, 0.0, -6.3325739776461107e-3, -3.3157279810811528e-3],
    &[1.0032421617436847e-7, 0.0, -8.554985212236946e-5, -2.7996123639930112e-5, 3.1662869888230554e-3],
    &[2.1177017355784961e-10, 0.0, -4.9660487006312393e-7, -1.1819168269145636e-7, 1.2698806174414217e-4, 2.0997092729947584e-5, -7.8607472118350159e-4],
    &[3.5761341075041037e-13, 0.0, -1.7788694578859367e-9, -3.326478107493879e-10, 1.4527304802820606e-6, 2.8366003845949527e-7, -1.3362523017594492e-4, -1.0498546364973792e-5],
    &[5.0324741755007081e-16, 0.0, -4.5595709870677323e-12, -7.0217229002417401e-13, 8.5717003035733312e-9, 1.6466066632094701e-9, -3.1064061107397131e-6, -4.2105786958831329e-7, 1.0021892263195869e-4, 7.5178826805663022e-6],
    &[6.0701933346574953e-19, 0.0, -9.0584535159012745e-15, -1.1857487924350032e-15, 3.2660321927533907e-11, 5.8982472362030617e-12, -3.017216031487607e-8, -4.8168591024406902e-9, 5.167324159331066e-6, 4.8453460056158069e-7, -5.0109461315979345e-5],
    &[6.4066580583888206e-22, 0.0, -1.4659516903197851e-17, -1.6686315437776002e-18, 9.0204403627541888e-14, 1.5118297103546291e-14, -1.6983519201760216e-10, -2.8421426541999906e-11, 8.4248591961192144e-8, 1.047507089779482e-8, -6.7764770699272677e-6, -3.6340095042118552e-7, 1.2824418462857801e-5],
    &[6.0104646080340448e-25, 0.0, -1.998877314217312e-20, -2.0127109890296168e-21, 1.9355570221722256e-16, 3.0035367787996803e-17, -6.4761599249928699e-13, -1.0829274328624251e-13, 7.0350937281890491e-10, 1.0053541585783246e-10, -1.9301863669560542e-7, -1.7553617068363481e-8, 6.8847591747757179e-6, 1.8170047521059276e-7],
    &[5.0748949027199097e-28, 0.0, -2.3530968940453285e-23, -2.1242735389418863e-24, 3.3779104612855057e-19, 4.8606970385065245e-20, -1.8307398481114613e-15, -2.9909326512457888e-16, 3.70142429968465e-12, 5.6416740177800148e-13, -2.4235726936277163e-9, -2.8178447501046463e-10, 3.6684811207900617e-7, 2.3092653036498884e-8, -5.1635693810817884e-6, -8.5693507709680266e-8],
    &[3.8954118060912716e-31, 0.0, -2.4359495533055567e-26, -1.9929065680156446e-27, 4.9520518428822897e-22, 6.6277334414986852e-23, -4.0660975198004439e-18, -6.4177805773945617e-19, 1.3753515951892163e-14, 2.1490748758411396e-15, -1.7677278394311834e-11, -2.341382581245255e-12, 7.0914174266471212e-9, 6.4713234070306827e-10, -5.7643111619403626e-7, -2.3816200339132934e-8, 2.5817846905408942e-6],
    &[2.7408870483854471e-34, 0.0, -2.2496003180177094e-29, -1.682697102999452e-30, 6.2459540884595078e-25, 7.8022292137812486e-26, -7.3865096258780448e-21, -1.1200232234071095e-21, 3.8766043422570928e-17, 6.0727070264323384e-18, -8.6438111084397927e-14, -1.2295310328892154e-14, 7.2420129935050696e-11, 8.0780074667562381e-12, -1.778083555311395e-8, -1.2330268299063693e-9, 7.3688823778974971e-7, 1.78621502543497e-8, -6.5522206741150835e-7],
    &[1.7801917946946604e-37, 0.0, -1.8747667410956458e-32, -1.2916125923290699e-33, 6.9032888126272014e-28, 8.0769460943973695e-29, -1.1301889142287258e-23, -1.6419656859209297e-24, 8.7012768675976413e-20, 1.3485054679111315e-20, -3.0906721351915825e-16, -4.5647408027375146e-17, 4.6804733241344562e-13, 5.8773456881956858e-14, -2.5820528308677179e-10, -2.3665344718803729e-11, 3.8228184979976969e-8, 1.9400309551679537e-9, -7.4242056074130918e-7, -8.9310751271748502e-9],
    &[1.0736377366002413e-40, 0.0, -1.423263339858381e-35, -9.0880358793145586e-37, 6.7834311449314587e-31, 7.4590627207003788e-32, -1.4892722040544669e-26, -2.0709884739653416e-27, 1.6105925857819728e-22, 2.4494803261685017e-23, -8.5617632782777634e-19, -1.2860965470956441e-19, 2.1267235658933494e-15, 2.870483000230908e-16, -2.2223500841407178e-12, -2.4096791691246689e-13, 8.0689765225536006e-10, 5.9389720388570647e-11, -7.0033612463906261e-8, -2.481595387902692e-9, 5.5681542055598189e-7, 3.0307651244523602e-9],
];

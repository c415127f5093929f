"""Singular L-shape solution terms.  AUTO-GENERATED -- do not edit.

Regenerate with:  python3 tools/gen_lshape_terms.py
"""

from numpy import arctan2, cos, pi, sin, sqrt

__all__ = ["singular_terms", "FIELD_NAMES"]

FIELD_NAMES = ('R', 'Rx', 'Ry', 'Rxx', 'Rxy', 'Ryy', 'lapR', 'bilapR', 'Z', 'Zx', 'Zy', 'lapZ')


def singular_terms(x, y):
    """Evaluate the singular fields and derivatives at points (x, y).

    Returns a dict with keys ('R', 'Rx', 'Ry', 'Rxx', 'Rxy', 'Ryy', 'lapR', 'bilapR', 'Z', 'Zx', 'Zy', 'lapZ').
    Inputs must avoid the corner r = 0.
    """
    x0 = x**2
    x1 = y**2
    x2 = x0 + x1
    x3 = arctan2(y, x)
    x4 = 2*x3 + pi
    x5 = (4555163/20000000)*x4
    x6 = cos(x5)
    x7 = (15444837/10000000)*x3 + (5444837/20000000)*pi
    x8 = sin(x7)
    x9 = x6 + x8
    x10 = (6334511/20000000)*pi
    x11 = 10889674*sin(x10)
    x12 = cos(x10) + cos((46334511/20000000)*pi)
    x13 = sin(x5)
    x14 = cos(x7)
    x15 = x11*x9 + x12*(15444837*x13 - 4555163*x14)
    x16 = x15*x2**(15444837/20000000)
    x17 = x1 - 1
    x18 = x17**2
    x19 = x0 - 1
    x20 = x19**2
    x21 = x18*x20
    x22 = 40000000*x16
    x23 = x2**(-4555163/20000000)
    x24 = x19*x23
    x25 = x15*x24
    x26 = x*x25
    x27 = 4555163*x13
    x28 = 15444837*x14
    x29 = 70353750043431*x12
    x30 = x11*(x27 - x28) - x29*x9
    x31 = x30*y
    x32 = x24*x31
    x33 = x18*x19
    x34 = -x30
    x35 = x*x17
    x36 = x23*x35
    x37 = x34*x36
    x38 = x15*x23
    x39 = x17*y
    x40 = x17*x20
    x41 = 800000000000000*x16
    x42 = x0*x41
    x43 = 400000000000000*x16
    x44 = 154448370000000*x38
    x45 = x0*x25
    x46 = 1235586960000000*x45
    x47 = 80000000*x
    x48 = x32*x47
    x49 = x2**(-24555163/20000000)
    x50 = x20*x49
    x51 = 70353750043431*x15
    x52 = x0*x51
    x53 = x*x31
    x54 = 30889674*x53
    x55 = 20749509956569*x6
    x56 = x55*y
    x57 = 238542989956569*x8
    x58 = x57*y
    x59 = 308896740000000*x14
    x60 = x*x59
    x61 = 91103260000000*x13
    x62 = x*x61
    x63 = -x60 + x62
    x64 = 20000000*x
    x65 = x27*y
    x66 = x28*y
    x67 = x11*(x56 + x58 + x63) - x29*(x6*x64 + x64*x8 - x65 + x66)
    x68 = x67*y
    x69 = x*y
    x70 = 617793480000000*y
    x71 = 40000000*x30
    x72 = x0*x17
    x73 = x35*y
    x74 = x19*x49
    x75 = x0*x49
    x76 = x17*x19
    x77 = 15444837*x30*x76
    x78 = x1*x49
    x79 = 154448370000000*x14
    x80 = 45551630000000*x13
    x81 = x2**(-1.0)
    x82 = x1*x81
    x83 = x*x81
    x84 = x56*x83 + x58*x83
    x85 = 20000000*x82
    x86 = x66*x83
    x87 = x65*x83
    x88 = -10000000*x6 - 10000000*x8
    x89 = x11*(x59*x82 - x61*x82 - x79 + x80 + x84) + x29*(x6*x85 + x8*x85 - x86 + x87 + x88)
    x90 = x17*x24
    x91 = x1*x41
    x92 = x1*x38
    x93 = 1235586960000000*x92
    x94 = 80000000*y
    x95 = x37*x94
    x96 = x18*x49
    x97 = x1*x51
    x98 = 30889674*x34*x69
    x99 = x*x55
    x100 = x*x57
    x101 = x61*y
    x102 = x59*y
    x103 = -x101 + x102
    x104 = x100 + x103 + x99
    x105 = 20000000*y
    x106 = -15444837*x*x14 + x*x27 + x105*x6 + x105*x8
    x107 = x*(-x104*x11 - x106*x29)
    x108 = x18*x50
    x109 = x0*x1
    x110 = 240000000000000000000000000000*x16
    x111 = 640000000000000000000000000000*x16
    x112 = x**4
    x113 = 337698000208468800000000000000*x15
    x114 = y**4
    x115 = 96000000000000000000000*x23*x53
    x116 = y**3
    x117 = x*x30
    x118 = x116*x117
    x119 = x**3
    x120 = x119*x31
    x121 = x116*x50
    x122 = x109*x15
    x123 = 112566000069489600000000000000*x122
    x124 = x0*x15
    x125 = 988469568000000000000000000000*x90
    x126 = x1*x15
    x127 = 56283000034744800000000000000*x15
    x128 = 619113000382192800000000000000*x15
    x129 = x112*x15
    x130 = x2**(-44555163/20000000)
    x131 = 276407647996432845480480000000*x130
    x132 = x131*x33
    x133 = x114*x15
    x134 = x131*x40
    x135 = x33*x49
    x136 = x116*x30
    x137 = x49*x76
    x138 = x130*x21
    x139 = 138203823998216422740240000000*x138
    x140 = x21/x2**(64555163/20000000)
    x141 = 76971173818298055305853748239*x140
    x142 = x130*x33
    x143 = 11256600006948960000000*x142
    x144 = x130*x20*x35
    x145 = x104*x11 + x106*x29
    x146 = x119*x145
    x147 = x145*x50
    x148 = x*x1
    x149 = x0*x68
    x150 = x40*x49
    x151 = x*x138
    x152 = 2471173920000000*x130
    x153 = x116*x67
    x154 = 140707500086862*x140
    x155 = 422122500260586*x140
    x156 = 6400000000000000*x24*x73
    x157 = x0*x81
    x158 = 20000000*x157
    x159 = x11*(-x157*x59 + x157*x61 + x79 - x80 + x84) - x29*(x158*x6 + x158*x8 + x86 - x87 + x88)
    x160 = x135*x69
    x161 = 2471173920000000*x160
    x162 = x50*x73
    x163 = 2471173920000000*x162
    x164 = x138*x69
    x165 = 281415000173724*x164
    x166 = x14*x157
    x167 = x13*x82
    x168 = x13*x157
    x169 = x14*x82
    x170 = x*x6
    x171 = x81*y
    x172 = x170*x171
    x173 = x*x8
    x174 = x171*x173
    x175 = 1244970597394140000000*x172 + 14312579397394140000000*x174
    x176 = 911032600000000000000*x13
    x177 = 3088967400000000000000*x14
    x178 = -x176 + x177
    x179 = 800000000000000*x157
    x180 = x14*y
    x181 = x180*x83
    x182 = 926690220000000*x181
    x183 = x13*y
    x184 = x183*x83
    x185 = 273309780000000*x184
    x186 = 200000000000000*x6
    x187 = 200000000000000*x8
    x188 = x186 + x187
    x189 = x11*(-12355869600000000000000*x166 - 94517400022294715747*x167 + 3644130400000000000000*x168 + 3684257597371845284253*x169 + x175 + x178) + x29*(-x179*x6 - x179*x8 - x182 + x185 + x188 + x55*x82 + x57*x82)
    x190 = x176 - x177
    x191 = 800000000000000*x82
    x192 = x11*(-3684257597371845284253*x166 - 3644130400000000000000*x167 + 94517400022294715747*x168 + 12355869600000000000000*x169 + x175 + x190) - x29*(x157*x55 + x157*x57 + x182 - x185 + x188 - x191*x6 - x191*x8)
    x193 = 61779348*x164
    x194 = 414990199131380000000*x170
    x195 = 4770859799131380000000*x173
    x196 = x119*x81
    x197 = x196*x6
    x198 = x157*x183
    x199 = x196*x8
    x200 = x157*x180
    x201 = x13*x196
    x202 = x6*y
    x203 = x157*x202
    x204 = x14*x196
    x205 = x8*y
    x206 = x157*x205
    x207 = -x11*(-x176*y + x177*y + x194*x82 + x194 + x195*x82 + x195 - 829980398262760000000*x197 + 3738647800022294715747*x198 - 9541719598262760000000*x199 - 16040127197371845284253*x200) + x29*(-x186*y - x187*y + 182206520000000*x201 + 820749509956569*x203 - 617793480000000*x204 + 1038542989956569*x206 + x60*x82 + x60 - x62*x82 - x62)
    x208 = x135*x47
    x209 = x116*x81
    x210 = x13*x209
    x211 = x170*x82
    x212 = x14*x209
    x213 = x173*x82
    x214 = x209*x6
    x215 = x209*x8
    x216 = x*x13
    x217 = x216*x82
    x218 = x*x14
    x219 = x218*x82
    x220 = x11*(-9266902200000000000000*x180 + 2733097800000000000000*x183 - x194 - x195 + 94517400022294715747*x198 - 3684257597371845284253*x200 - 3644130400000000000000*x210 + 1244970597394140000000*x211 + 12355869600000000000000*x212 + 14312579397394140000000*x213) - x29*(x157*x56 + x157*x58 + 600000000000000*x202 + 600000000000000*x205 - 800000000000000*x214 - 800000000000000*x215 - 273309780000000*x217 + 926690220000000*x219 + x63)
    x221 = 414990199131380000000*x202
    x222 = 4770859799131380000000*x205
    x223 = x11*(x*x176 - x*x177 + x157*x221 + x157*x222 - 829980398262760000000*x214 - 9541719598262760000000*x215 - 3738647800022294715747*x217 + 16040127197371845284253*x219 + x221 + x222) + x29*(-x*x186 - x*x187 + x101*x157 + x101 - x102*x157 - x102 - 182206520000000*x210 + 820749509956569*x211 + 617793480000000*x212 + 1038542989956569*x213)
    x224 = x150*x94
    x225 = x11*(3644130400000000000000*x201 + 1244970597394140000000*x203 - 12355869600000000000000*x204 + 14312579397394140000000*x206 - 2733097800000000000000*x216 - 94517400022294715747*x217 + 9266902200000000000000*x218 + 3684257597371845284253*x219 - x221 - x222) + x29*(x100*x82 + x103 + 600000000000000*x170 + 600000000000000*x173 - 800000000000000*x197 + 273309780000000*x198 - 800000000000000*x199 - 926690220000000*x200 + x82*x99)
    x226 = 30889674*x151
    x227 = x138*y
    x228 = 30889674*x227
    x229 = 430542163437756064266251761*x6
    x230 = 24000000000000000000000*y
    x231 = 48000000000000000000000*x209
    x232 = 477085979913138000000000000000*x8
    x233 = 41499019913138000000000000000*x6
    x234 = 8299803982627600000000000000*x6
    x235 = x2**(-2.0)
    x236 = x112*x235
    x237 = 49798823895765600000000000000*x6
    x238 = 95417195982627600000000000000*x8
    x239 = 572503175895765600000000000000*x8
    x240 = 518046391894873811370120000000*x181
    x241 = x119*x235
    x242 = x183*x241
    x243 = x116*x235
    x244 = x218*x243
    x245 = x216*x243
    x246 = 113104608000891788629880000000*x184
    x247 = x180*x241
    x248 = x109*x235
    x249 = -41929562076575756064266251761*x248*x6 - 533988737970557778804506251761*x248*x8 + 4149901991313800000000000000*x6 + 47708597991313800000000000000*x8
    x250 = 10932391200000000000000*x13
    x251 = 37067608800000000000000*x14
    x252 = 34573931597371845284253*x14*x248
    x253 = 9204843400022294715747*x13*x248
    x254 = 24829980398262760000000*x172 + 33541719598262760000000*x174
    x255 = x114*x235
    x256 = (1/3)*x4
    x257 = sin(x256)
    x258 = x2**(1/3)*x257
    x259 = x19*x258
    x260 = 3*x258
    x261 = x2**(-2/3)
    x262 = x19*x261
    x263 = x257*x262
    x264 = cos(x256)
    x265 = x264*y
    x266 = x262*x265
    x267 = x261*x35
    x268 = x257*x261
    x269 = (2/3)*x76
    x270 = x257*x269/x2**(5/3)
    out_R = (10000000/70353750043431)*x16*x21
    out_Rx = (1/70353750043431)*x33*(x*x22 + 15444837*x26 + x32)
    out_Ry = (1/70353750043431)*x40*(x22*y + x37 + 15444837*x38*x39)
    out_Rxx = (1/703537500434310000000)*x18*(x19*x43 + x20*x44 + x42 + x46 + x48 - x50*x52 + x50*x54 - x50*x68)
    out_Rxy = (1/703537500434310000000)*x76*(x1*x24*x71 + x15*x36*x70 + 1600000000000000*x16*x69 - x23*x71*x72 + x26*x70 - x51*x73*x74 - x75*x77 + x77*x78 + x89*x90)
    out_Ryy = (1/703537500434310000000)*x20*(x107*x96 + x17*x43 + x17*x93 + x18*x44 + x91 + x95 - x96*x97 + x96*x98)
    out_lapR = (1/703537500434310000000)*x107*x108 - 1/703537500434310000000*x108*x52 + (1/703537500434310000000)*x108*x54 - 1/703537500434310000000*x108*x67*y - 1/703537500434310000000*x108*x97 + (1/703537500434310000000)*x108*x98 + (1/703537500434310000000)*x18*x42 + (1/703537500434310000000)*x18*x46 + (1/703537500434310000000)*x18*x48 + (1/703537500434310000000)*x20*x91 + (1/703537500434310000000)*x20*x95 + (2/4555163)*x21*x38 + (1/703537500434310000000)*x33*x43 + (1/703537500434310000000)*x40*x43 + (1/703537500434310000000)*x40*x93
    out_bilapR = -1/87942187554288750000*x*x135*x145 + (160/4555163)*x0*x18*x38 + (1/70353750043431000000000000000000000)*x1*x111*x19 - 3/28469768750000000000*x1*x144*x145 + (128/4555163)*x1*x45 - 1/70353750043431000000000000000000000*x108*x127 + (1/70353750043431000000000000000000000)*x108*(-x11*(-x157*x232 - x157*x233 + x234*x82 + x236*x237 + x236*x239 + x238*x82 - x240 - 228099564002229471574700000000*x242 - 73685151947436905685060000000*x244 + 1890348000445894314940000000*x245 + x246 + 1109777935737184528425300000000*x247 + x249) + x29*(-30889674000000000000000*x166 - 1822065200000000000000*x167 + 9110326000000000000000*x168 + 6177934800000000000000*x169 + x178 + x194*x243 + x195*x243 - 50074950995656900000000*x202*x241 - 71854298995656900000000*x205*x241 - x236*x250 + x236*x251 - x252 + x253 + x254)) - 1/70353750043431000000000000000000000*x108*(x11*(x157*x234 + x157*x238 - x232*x82 - x233*x82 + x237*x255 + x239*x255 + x240 - 1890348000445894314940000000*x242 - 1109777935737184528425300000000*x244 + 228099564002229471574700000000*x245 - x246 + 73685151947436905685060000000*x247 + x249) + x29*(-6177934800000000000000*x166 - 9110326000000000000000*x167 + 1822065200000000000000*x168 + 30889674000000000000000*x169 - 50074950995656900000000*x170*x243 - 71854298995656900000000*x173*x243 + x190 + x221*x241 + x222*x241 + x250*x255 - x251*x255 + x252 - x253 + x254)) + (1280000000/70353750043431)*x109*x16 + (1/70353750043431000000000000000000000)*x110*x18 + (1/70353750043431000000000000000000000)*x110*x20 + (1/70353750043431000000000000000000000)*x111*x72 - 1/70353750043431000000000000000000000*x112*x113*x96 - 1/70353750043431000000000000000000000*x113*x114*x50 + (1/70353750043431000000000000000000000)*x115*x18 - 1/70353750043431000000000000000000000*x115*x20 - 1/711744218750*x117*x121 - 1/70353750043431000000000000000000000*x118*x143 + (128/70353750043431)*x118*x24 + (1/6250000000000)*x120*x130*x40 - 1/355872109375*x120*x137 - 1/70353750043431000000000000000000000*x120*x143 - 128/70353750043431*x120*x17*x23 + (1/711744218750)*x120*x96 - 1/43971093777144375000*x121*x67 + (1/70353750043431000000000000000000000)*x122*x132 + (1/70353750043431000000000000000000000)*x122*x134 - 1/78125*x122*x137 - 1094059289956569/500000000000000000000*x122*x140 - 1/70353750043431000000000000000000000*x123*x50 - 1/70353750043431000000000000000000000*x123*x96 + (1/70353750043431000000000000000000000)*x124*x125 + (1/70353750043431000000000000000000000)*x124*x139 + (1/70353750043431000000000000000000000)*x125*x126 + (1/70353750043431000000000000000000000)*x126*x139 - 1/70353750043431000000000000000000000*x127*x33*x78 - 1/70353750043431000000000000000000000*x127*x40*x75 - 1/70353750043431000000000000000000000*x128*x33*x75 - 1/70353750043431000000000000000000000*x128*x40*x78 + (1/70353750043431000000000000000000000)*x129*x132 - 1/70353750043431000000000000000000000*x129*x141 + (1/70353750043431000000000000000000000)*x133*x134 - 1/70353750043431000000000000000000000*x133*x141 + (3/1423488437500)*x135*x53 - 1/29314062518096250000*x135*x68 + (1/6250000000000)*x136*x144 + (1/355872109375)*x136*x35*x74 - 1/56939537500000000000*x138*x68 - 3/28469768750000000000*x142*x149 + (1/70353750043431000000000000000000000)*x145*x148*x155 - 1/56939537500000000000*x145*x151 - 1/70353750043431000000000000000000000*x146*x152*x33 + (1/70353750043431000000000000000000000)*x146*x154 - 1/43971093777144375000*x146*x96 - 1/14657031259048125000*x147*x148 - 1/29314062518096250000*x147*x35 + (1/70353750043431000000000000000000000)*x149*x155 - 1/14657031259048125000*x149*x96 - 1/87942187554288750000*x150*x68 + (1/70353750043431000000000000000000000)*x151*(x11*(16599607965255200000000000000*x170 + 190834391965255200000000000000*x173 + 370676088000000000000000000000*x180 - 109323912000000000000000000000*x183 + x196*x229 - 11342088002675365889640000000*x198 + 56902758057419778804506251761*x199 + 442110911684621434110360000000*x200 + 218647824000000000000000000000*x210 - 91297843808903600000000000000*x211 - 741352176000000000000000000000*x212 - 1049589155808903600000000000000*x213) + x29*(94517400022294715747*x201 + 2489941194788280000000*x203 - 3684257597371845284253*x204 + 28625158794788280000000*x206 + 3644130400000000000000*x216 - 20042717200000000000000*x217 - 12355869600000000000000*x218 + 67957282800000000000000*x219 + x230*x6 + x230*x8 - x231*x6 - x231*x8)) - 1/70353750043431000000000000000000000*x152*x153*x40 + (1/70353750043431000000000000000000000)*x153*x154 + (1/70353750043431000000000000000000000)*x156*x159 + (1/70353750043431000000000000000000000)*x156*x89 + (1/70353750043431000000000000000000000)*x159*x161 + (1/70353750043431000000000000000000000)*x159*x163 - 1/70353750043431000000000000000000000*x159*x165 + (320000000/70353750043431)*x16*x76 + (1/439710937771443750000000000)*x160*x189 + (1/70353750043431000000000000000000000)*x161*x89 + (1/439710937771443750000000000)*x162*x192 + (1/70353750043431000000000000000000000)*x163*x89 - 1/70353750043431000000000000000000000*x165*x89 + (32/4555163)*x18*x25 + (1/70353750043431000000000000000000000)*x189*x193 + (1/70353750043431000000000000000000000)*x192*x193 + (160/4555163)*x20*x92 + (1/70353750043431000000000000000000000)*x207*x208 + (1/70353750043431000000000000000000000)*x207*x226 - 1/70353750043431000000000000000000000*x208*x220 - 1/70353750043431000000000000000000000*x220*x226 - 1/70353750043431000000000000000000000*x223*x224 - 1/70353750043431000000000000000000000*x223*x228 - 1/70353750043431000000000000000000000*x224*x225 - 1/70353750043431000000000000000000000*x225*x228 + (1/70353750043431000000000000000000000)*x227*(x11*(-218647824000000000000000000000*x201 + 16599607965255200000000000000*x202 - 91297843808903600000000000000*x203 + 741352176000000000000000000000*x204 + 190834391965255200000000000000*x205 - 1049589155808903600000000000000*x206 + x209*x229 + 56902758057419778804506251761*x215 + 109323912000000000000000000000*x216 + 11342088002675365889640000000*x217 - 370676088000000000000000000000*x218 - 442110911684621434110360000000*x219) - x29*(24000000000000000000000*x170 + 24000000000000000000000*x173 + 12355869600000000000000*x180 - 3644130400000000000000*x183 - 48000000000000000000000*x197 + 20042717200000000000000*x198 - 48000000000000000000000*x199 - 67957282800000000000000*x200 - 94517400022294715747*x210 + 2489941194788280000000*x211 + 3684257597371845284253*x212 + 28625158794788280000000*x213)) - 3/1423488437500*x31*x35*x50 + (32/4555163)*x38*x40 + (128/4555163)*x72*x92
    out_Z = x17*x259
    out_Zx = 2*((1/3)*x1 - 1/3)*(x*x260 + x*x263 - x266)
    out_Zy = 2*((1/3)*x0 - 1/3)*(x260*y + x264*x267 + x268*x39)
    out_lapZ = (8/3)*x*x266 - 2*x0*x270 + (8/3)*x1*x263 - 2*x1*x270 + 2*x17*x258 + 2*x259 - 8/3*x265*x267 + 2*x268*x269 + (8/3)*x268*x72
    return {
        "R": out_R + 0.0 * x,
        "Rx": out_Rx + 0.0 * x,
        "Ry": out_Ry + 0.0 * x,
        "Rxx": out_Rxx + 0.0 * x,
        "Rxy": out_Rxy + 0.0 * x,
        "Ryy": out_Ryy + 0.0 * x,
        "lapR": out_lapR + 0.0 * x,
        "bilapR": out_bilapR + 0.0 * x,
        "Z": out_Z + 0.0 * x,
        "Zx": out_Zx + 0.0 * x,
        "Zy": out_Zy + 0.0 * x,
        "lapZ": out_lapZ + 0.0 * x,
    }

#include "internal.hpp"

#include "walshcs/error.hpp"

namespace walshcs::detail {

namespace {

// Extremal-phase Daubechies low-pass filters (40 significant digits),
// normalized to sum sqrt(2).
const std::vector<std::vector<const char*>> kTable = {
    // p = 1
    {"0.7071067811865475244008443621048490392848",
     "0.7071067811865475244008443621048490392848"},
    // p = 3
    {"0.3326705529500826159985115891390056300129",
     "0.8068915093110925764944936040887134905193",
     "0.4598775021184915700951519421476167208081",
     "-0.1350110200102545886963899066993744805622",
     "-0.0854412738820266616928191691817733115362",
     "0.03522629188570953660274066471551002932776"},
    // p = 4
    {"0.2303778133088965008632911830440708500016",
     "0.7148465705529156470899219552739926037076",
     "0.6308807679298589078817163383006152202032",
     "-0.02798376941685985421141374718007538541199",
     "-0.1870348117190930840795706727890814195845",
     "0.03084138183556076362721936253495905017031",
     "0.03288301166688519973540751354924438866454",
     "-0.0105974017850690321048832085240272291811"},
    // p = 5
    {"0.1601023979741929144807237480204207336505",
     "0.6038292697971896705401193065250621075074",
     "0.7243085284377729277280712441022186407688",
     "0.1384281459013207315053971463390246973141",
     "-0.2422948870663820318625713794746163619915",
     "-0.03224486958463837464847975506213492831356",
     "0.07757149384004571352313048938860181980623",
     "-0.006241490212798274274190519112920192970764",
     "-0.0125807519990819994685097399317757929492",
     "0.003335725285473771277998183415817355747637"},
    // p = 6
    {"0.1115407433501094636213239172409234390425",
     "0.4946238903984530856772041768778555886378",
     "0.7511339080210953506789344984397316855803",
     "0.3152503517091976290859896548109263966495",
     "-0.2262646939654398200763145006609034656705",
     "-0.1297668675672619355622896058765854608452",
     "0.09750160558732304910234355253812534233983",
     "0.02752286553030572862554083950419321365739",
     "-0.03158203931748602956507908069984866905748",
     "0.000553842201161496139251918398046501220611",
     "0.004777257510945510639635975246820707050231",
     "-0.001077301085308479564852621609587200035235"},
    // p = 7
    {"0.07785205408500917901996352195789374837918",
     "0.3965393194819173065390003909368428563587",
     "0.729132090846235119916943070339282051718",
     "0.4697822874051931224715911609744517386818",
     "-0.1439060039285649754050683622130460017953",
     "-0.2240361849938749826381404202332509644758",
     "0.07130921926683026475087657050112904822711",
     "0.08061260915108307191292248035938190585824",
     "-0.03802993693501441357959206160185803585446",
     "-0.01657454163066688065410767489170265479205",
     "0.01255099855609984061298988603418777957289",
     "0.0004295779729213665211321291228197322228235",
     "-0.001801640704047490915268262912739550962586",
     "0.0003537137999745202484462958363064254310959"},
    // p = 8
    {"0.054415842243104009955009405202999355036",
     "0.3128715909142999706591623755057177219497",
     "0.6756307362972898068078007670471831499869",
     "0.5853546836542067127712655200450981944303",
     "-0.01582910525634930566738054787646630415774",
     "-0.2840155429615469265162031323741647324684",
     "0.0004724845739132827703605900098258949861948",
     "0.1287474266204784588570292875097083843023",
     "-0.01736930100180754616961614886809598311413",
     "-0.04408825393079475150676372323896350189752",
     "0.0139810279173982816487229305726334514424",
     "0.008746094047405776716382743246475640180402",
     "-0.004870352993451574310422181557109824016635",
     "-0.0003917403733769470462980803573237762675229",
     "0.000675449406450569366369547573879299121849",
     "-0.0001174767841247695337306282316988909444087"},
    // p = 9
    {"0.03807794736387834658869765887955118448772",
     "0.2438346746125903537320415816492844155264",
     "0.604823123690111111903076867434236170896",
     "0.6572880780513005380782126390451732140306",
     "0.1331973858250075761909549458997955536922",
     "-0.2932737832791749088064031952421987310439",
     "-0.09684078322297646051350813353769660224825",
     "0.1485407493381063801350727175060423024791",
     "0.03072568147933337921231740072037882714106",
     "-0.06763282906132997367564227482971901592579",
     "0.0002509471148314519575871897499885543315176",
     "0.02236166212367909720537378270269095241856",
     "-0.00472320475775139727792570784824246540573",
     "-0.004281503682463429834496795002314531876481",
     "0.001847646883056226476619129491125677051121",
     "0.0002303857635231959672052163928245421692941",
     "-0.0002519631889427101369749886842878606607282",
     "3.934732031627159948068988306589150707782e-5"},
    // p = 10
    {"0.02667005790055555358661744877130858277192",
     "0.1881768000776914890208929736790939942703",
     "0.5272011889317255864817448279595081924981",
     "0.6884590394536035657418717825492358539771",
     "0.2811723436605774607487269984455892876244",
     "-0.2498464243273153794161018979207791000565",
     "-0.1959462743773770435042992543190981318767",
     "0.1273693403357932600826772332014009770786",
     "0.09305736460357235116035228983545273226943",
     "-0.07139414716639708714533609307605064767293",
     "-0.02945753682187581285828323760141839199388",
     "0.03321267405934100173976365318215912897978",
     "0.003606553566956169655423291417133403299517",
     "-0.01073317548333057504431811410651364448112",
     "0.001395351747052901165789318447957707567661",
     "0.001992405295185056117158742242640643211763",
     "-0.0006858566949597116265613709819265714196625",
     "-0.0001164668551292854509514809710258991891527",
     "9.358867032006959133405013034222854399688e-5",
     "-1.326420289452124481243667531226683305749e-5"},
};

int table_row(int p) {
    if (p == 1) return 0;
    if (p >= 3 && p <= 10) return p - 2;
    throw DomainError("unsupported Daubechies order p (expected 1 or 3..10)");
}

}  // namespace

std::vector<qreal> daubechies_filter(int p) {
    std::vector<qreal> h;
    for (const char* s : kTable[table_row(p)]) h.push_back(strtoflt128(s, nullptr));
    return h;
}

}  // namespace walshcs::detail

# Copyright 2026 The culteval Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Hand-written zh-en items for the bundled sample corpus.
# Fields: id, category, domain, source, source term, reference, reference
# term, explication, standard equivalent, alternative rendering used by the
# weaker sample system.

ITEMS = [
    ("a1", "Linguistic", "literary", "他这个人吃软不吃硬，你好好跟他说就行。", "吃软不吃硬",
     "He is the type who responds to gentle persuasion but not to pressure, so just talk to him nicely.",
     "responds to gentle persuasion but not to pressure",
     "An idiom describing someone who yields to kindness and coaxing but resists force or threats.",
     None, "eats soft but not hard"),
    ("a2", "Linguistic", "literary", "上班时间他总在摸鱼，老板早就看出来了。", "摸鱼",
     "He is always slacking off during work hours, and the boss noticed long ago.", "slacking off",
     "Internet slang for idling or doing personal things while appearing to work.", "slack off", "touching fish"),
    ("a3", "Linguistic", "literary", "看到那段视频，我瞬间破防了。", "破防",
     "Watching that video, my defenses instantly crumbled.", "my defenses instantly crumbled",
     "Slang meaning that one's emotional guard is broken, so one is suddenly moved or upset.", None,
     "I broke the defense"),
    ("a4", "Linguistic", "literary", "这件事你就别画蛇添足了。", "画蛇添足",
     "Don't gild the lily on this matter.", "gild the lily",
     "An idiom from the story of a man who drew feet on a snake and lost a contest, meaning to spoil something by adding what is unnecessary.",
     "gild the lily", "draw legs on a snake"),
    ("a5", "Linguistic", "literary", "他们俩一直是井水不犯河水。", "井水不犯河水",
     "The two of them have always left each other alone.", "left each other alone",
     "An idiom saying well water does not intrude on river water, meaning two parties stay out of each other's affairs.",
     None, "well water does not offend river water"),
    ("a6", "Linguistic", "literary", "这次考试他是临时抱佛脚，结果可想而知。", "临时抱佛脚",
     "He crammed at the last minute for this exam, so you can guess the result.", "crammed at the last minute",
     "An idiom about hugging the Buddha's feet only when trouble comes, describing last-minute effort without preparation.",
     None, "hugged the Buddha's feet"),
    ("a7", "Linguistic", "literary", "别担心，车到山前必有路。", "车到山前必有路",
     "Don't worry, things will work themselves out when the time comes.", "things will work themselves out",
     "A proverb saying that when the cart reaches the mountain a road will appear, meaning a solution will turn up when it is needed.",
     "we will cross that bridge when we come to it", "the cart will find a road at the mountain"),
    ("a8", "Linguistic", "institutional", "他在会上一直打太极，什么都不肯答应。", "打太极",
     "He kept dodging the issue at the meeting and would not commit to anything.", "dodging the issue",
     "A metaphor from the yielding movements of tai chi, meaning to evade questions or responsibility with vague replies.",
     None, "playing tai chi"),
    ("a9", "Linguistic", "literary", "你这不是对牛弹琴吗？", "对牛弹琴",
     "Isn't this just casting pearls before swine?", "casting pearls before swine",
     "An idiom about playing the zither to a cow, meaning to address an audience that cannot appreciate what is said.",
     "cast pearls before swine", "playing the lute to a cow"),
    ("a10", "Linguistic", "institutional", "新来的经理三天打鱼，两天晒网，项目一直拖着。", "三天打鱼，两天晒网",
     "The new manager works by fits and starts, so the project keeps dragging on.", "works by fits and starts",
     "An idiom about fishing for three days and drying the nets for two, describing someone who lacks perseverance.",
     None, "fishes for three days and dries nets for two"),
    ("a11", "Linguistic", "literary", "这家公司的老板是个铁公鸡。", "铁公鸡",
     "The boss of this company is a real miser who never parts with a penny.", "a real miser",
     "Slang for an iron rooster from which no feather can be plucked, meaning an extremely stingy person.",
     "skinflint", "an iron rooster"),
    ("a12", "Linguistic", "literary", "我们这次只是打酱油的，主角不是我们。", "打酱油",
     "We are just bystanders this time; the leading roles are not ours.", "just bystanders",
     "Internet slang about going out to buy soy sauce, meaning one is merely passing by and not involved.",
     None, "just buying soy sauce"),
    ("a13", "Linguistic", "literary", "他说话总是拐弯抹角。", "拐弯抹角",
     "He always beats around the bush when he talks.", "beats around the bush",
     "An idiom about turning corners, meaning to speak indirectly instead of coming to the point.",
     "beat around the bush", "turns corners"),
    ("a14", "Linguistic", "institutional", "这个办法简直是亡羊补牢。", "亡羊补牢",
     "This measure is like mending the pen after the sheep are lost.", "mending the pen after the sheep are lost",
     "An idiom about repairing the fold after losing sheep, meaning to take corrective action after a loss so that it does not recur.",
     None, "closing the barn door"),
    ("a15", "Linguistic", "literary", "他们俩的关系早就凉凉了。", "凉凉",
     "Their relationship went cold long ago.", "went cold",
     "Internet slang literally meaning cool-cool, used to say that something has failed or come to an end.",
     None, "became cool cool"),
    ("a16", "Linguistic", "institutional", "这个方案我看是八字还没一撇呢。", "八字还没一撇",
     "As far as I can see, this plan has not even got off the ground.", "has not even got off the ground",
     "An idiom saying that not even the first stroke of the character for eight has been written, meaning something has barely started.",
     None, "has not written the first stroke of eight"),
    ("a17", "Social", "institutional", "他今年参加高考，全家都很紧张。", "高考",
     "He is taking the gaokao this year, and the whole family is nervous.", "gaokao",
     "China's national college entrance examination, a highly competitive test that largely decides university admission.",
     "national college entrance examination", "high exam"),
    ("a18", "Social", "literary", "春节前，火车站挤满了回家的人。", "春节",
     "Before the Spring Festival, the train station was packed with people going home.", "Spring Festival",
     "The lunar new year, the most important family reunion holiday in China, marked by mass travel home.",
     "Chinese New Year", "holidays"),
    ("a19", "Social", "institutional", "他靠着关系户的身份进了单位。", "关系户",
     "He got into the work unit as someone with connections.", "someone with connections",
     "A person or organization that obtains favors through personal connections rather than merit.",
     None, "a relationship household"),
    ("a20", "Social", "literary", "他的父亲曾官至尚书。", "尚书",
     "His father once rose to the rank of minister.", "minister",
     "A high-ranking official heading one of the ministries of the imperial government.", None, "secretary"),
    ("a21", "Social", "literary", "中秋节晚上，一家人在院子里赏月。", "中秋节",
     "On the night of the Mid-Autumn Festival, the family admired the moon in the courtyard.", "Mid-Autumn Festival",
     "A harvest festival on the fifteenth day of the eighth lunar month, associated with the full moon and family reunion.",
     None, "autumn holiday"),
    ("a22", "Social", "institutional", "他毕业后被分配到一个国营单位工作。", "单位",
     "After graduating he was assigned to work at a state-run work unit.", "work unit",
     "The workplace organization of the planned economy, which also provided housing, welfare and social control for employees.",
     None, "unit"),
    ("a23", "Social", "literary", "过年时，长辈会给孩子发红包。", "红包",
     "During the New Year, elders give children red envelopes.", "red envelopes",
     "Red paper envelopes containing money, given as gifts at festivals and celebrations to convey good wishes.",
     None, "red bags"),
    ("a24", "Social", "institutional", "她家的户口还在农村。", "户口",
     "Her family's household registration is still in the countryside.", "household registration",
     "The hukou system, which records a person's official residence and ties access to local public services to it.",
     "hukou", "house mouth"),
    ("a25", "Social", "literary", "清明节那天，我们回老家扫墓。", "清明节",
     "On Qingming Festival, we went back to our hometown to sweep the graves.", "Qingming Festival",
     "A spring festival for honoring ancestors by cleaning and tending their graves.", "Tomb-Sweeping Day",
     "Clear Bright Day"),
    ("a26", "Social", "literary", "小王是我们村里的第一个大学生，乡亲们都来送行。", "乡亲们",
     "Xiao Wang was the first university student from our village, and the fellow villagers all came to see him off.",
     "fellow villagers",
     "People from the same village or home region, bound by a sense of shared origin and mutual obligation.",
     None, "relatives"),
    ("a27", "Social", "literary", "他是家里的独生子女，从小被宠着。", "独生子女",
     "He is an only child and has been spoiled since he was little.", "an only child",
     "A child of the one-child policy era, often the focus of attention from parents and grandparents.",
     None, "a single son and daughter"),
    ("a28", "Social", "literary", "他考中了状元，全城都轰动了。", "状元",
     "He came first in the imperial examination, and the whole city was abuzz.",
     "came first in the imperial examination",
     "The title given to the top scorer in the highest level of the imperial civil service examination.",
     None, "became the champion"),
    ("a29", "Social", "institutional", "他在饭桌上给领导敬酒。", "敬酒",
     "At the dinner table he proposed a toast to his superior.", "proposed a toast",
     "The custom of respectfully offering a toast to seniors or superiors at a banquet to show deference.",
     None, "respected the wine"),
    ("a30", "Social", "literary", "她每年都去庙会凑热闹。", "庙会",
     "Every year she goes to the temple fair to join in the fun.", "temple fair",
     "A traditional fair held around a temple during festivals, with food stalls, performances and trading.",
     None, "temple meeting"),
    ("a31", "Social", "institutional", "他们在居委会登记了新地址。", "居委会",
     "They registered their new address with the residents' committee.", "residents' committee",
     "The neighborhood-level organization that handles local administration and community affairs in Chinese cities.",
     None, "office"),
    ("a32", "Social", "literary", "他是个北漂，在北京已经待了十年。", "北漂",
     "He is a Beijing drifter who has been in the city for ten years.", "Beijing drifter",
     "A person from elsewhere who lives and works in Beijing without local household registration, often in unstable conditions.",
     None, "north floater"),
    ("a33", "Material", "literary", "冬天他睡在炕上，一点也不冷。", "炕",
     "In winter he sleeps on the kang, a heated brick bed, and never feels cold.", "kang, a heated brick bed",
     "A raised brick platform heated from below, used for sleeping in northern Chinese homes.", "heated brick bed",
     "bed"),
    ("a34", "Material", "literary", "她穿着一件红色的旗袍出席了婚礼。", "旗袍",
     "She attended the wedding in a red qipao.", "qipao",
     "A close-fitting one-piece dress with a high collar, associated with Chinese women's formal wear.", "cheongsam",
     "gown"),
    ("a35", "Material", "literary", "除夕夜全家人一起包饺子。", "饺子",
     "On New Year's Eve the whole family made dumplings together.", "dumplings",
     "Crescent-shaped dumplings with meat or vegetable filling, traditionally made together by the family on New Year's Eve.",
     "jiaozi", "pies"),
    ("a36", "Material", "literary", "他们一家住在胡同深处的四合院里。", "四合院",
     "The family lives in a courtyard house deep in the hutong.", "courtyard house",
     "A traditional residence with buildings on four sides enclosing a central courtyard, typical of old Beijing.",
     "siheyuan", "four-sided yard"),
    ("a37", "Material", "literary", "早上他喜欢喝一碗豆浆，配两根油条。", "油条",
     "In the morning he likes a bowl of soy milk with two youtiao.", "youtiao",
     "Long deep-fried strips of dough, a common breakfast food usually eaten with soy milk.", "fried dough sticks",
     "oil strips"),
    ("a38", "Material", "literary", "奶奶把月饼切成小块分给大家。", "月饼",
     "Grandma cut the mooncake into small pieces and shared them with everyone.", "mooncake",
     "A round pastry with sweet or savory filling, eaten and given as gifts at the Mid-Autumn Festival.", None,
     "cake"),
    ("a39", "Material", "literary", "老人用毛笔在红纸上写春联。", "春联",
     "The old man wrote spring couplets on red paper with a brush.", "spring couplets",
     "Paired lines of verse written on red paper and pasted on doorways at the Spring Festival for good fortune.",
     None, "spring poems"),
    ("a40", "Material", "literary", "她在茶馆里点了一壶龙井。", "龙井",
     "She ordered a pot of Longjing tea in the teahouse.", "Longjing tea",
     "A famous green tea from Hangzhou, prized for its flat leaves and fresh taste.", "Dragon Well tea",
     "dragon well"),
    ("a41", "Material", "institutional", "他穿上中山装去参加典礼。", "中山装",
     "He put on a Mao suit to attend the ceremony.", "Mao suit",
     "A tunic suit with four pockets and a turned-down collar, promoted by Sun Yat-sen and worn as formal dress.",
     "Zhongshan suit", "suit"),
    ("a42", "Ecological", "literary", "江南的梅雨季节，衣服总是晾不干。", "梅雨",
     "During the plum rain season south of the Yangtze, clothes never dry.", "plum rain",
     "The early-summer rainy season in the lower Yangtze region, which coincides with the ripening of plums.",
     None, "rainy"),
    ("a43", "Ecological", "literary", "孩子们在动物园里看到了熊猫。", "熊猫",
     "The children saw a panda at the zoo.", "panda",
     "The giant panda, a bear native to the mountains of southwest China and a national symbol.", "giant panda",
     "bear cat"),
    ("a44", "Ecological", "institutional", "黄河是中华民族的母亲河。", "黄河",
     "The Yellow River is the mother river of the Chinese nation.", "Yellow River",
     "China's second longest river, regarded as the cradle of Chinese civilization.", None, "Huang He"),
    ("a45", "Ecological", "literary", "这里的人们习惯在三伏天喝绿豆汤。", "三伏天",
     "People here are used to drinking mung bean soup during the dog days.", "dog days",
     "The hottest period of summer, counted in three ten-day periods by the traditional calendar.",
     "dog days of summer", "three fu days"),
    ("a46", "Ecological", "literary", "院子里的竹子被风吹得沙沙响。", "竹子",
     "The bamboo in the courtyard rustled in the wind.", "bamboo",
     "A fast-growing grass prized in Chinese culture as a symbol of integrity and resilience.", None, "trees"),
    ("a47", "Religious", "literary", "老人相信阴阳调和才能身体健康。", "阴阳",
     "The old man believes that health depends on balancing yin and yang.", "yin and yang",
     "The complementary opposing forces of Chinese philosophy, whose balance is thought to govern nature and health.",
     None, "dark and light"),
    ("a48", "Religious", "literary", "她在菩萨面前许了一个愿。", "菩萨",
     "She made a wish before the bodhisattva.", "bodhisattva",
     "An enlightened being in Buddhism who postpones nirvana to help others, widely worshipped in China.", None,
     "statue"),
    ("a49", "Religious", "literary", "传说玉帝住在天宫里。", "玉帝",
     "Legend has it that the Jade Emperor lives in the heavenly palace.", "Jade Emperor",
     "The supreme ruler of heaven in Chinese folk religion and Taoist mythology.", None, "jade king"),
    ("a50", "Religious", "literary", "奶奶说今天不宜出门，要看看黄历。", "黄历",
     "Grandma said today is not a good day to go out and that she would check the almanac.", "almanac",
     "The traditional Chinese almanac listing auspicious and inauspicious activities for each day.", None,
     "yellow calendar"),
]

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

# Long-sentence items for the perturbation-sensitivity fixture. Each base
# hypothesis is an independent paraphrase that realizes the cultural span.

SENSITIVITY = [
    dict(id="s1", category="Material",
         source="那年冬天特别冷，爷爷每天晚上都早早地睡在烧得暖烘烘的炕上，一边抽着旱烟，一边给我们讲村里过去的故事。",
         term="炕",
         reference="That winter was especially cold, and every evening grandfather went to bed early on the warm kang, smoking his pipe while he told us old stories about the village and the people who had lived there long before us.",
         ref_term="kang",
         explication="A raised brick platform heated from below, used for sleeping in northern Chinese homes.",
         hyp="That winter was particularly cold, so every night grandpa went to sleep early on the warm kang, puffing on his pipe as he told us stories about the village and the people who lived there long ago.",
         hypernym="bed", clause="symbolizing hardship",
         subs={"Literalization": "fire bed", "SenseError": "sofa", "MisSubstitution": "futon",
               "PragmaticShift": "shabby old kang"}),
    dict(id="s2", category="Linguistic",
         source="报告本来已经写得很清楚了，他非要在结尾再加上一大段解释，大家都觉得这完全是画蛇添足，反而让人看不懂了。",
         term="画蛇添足",
         reference="The report had already been written very clearly, but he insisted on adding a long explanation at the end, and everyone felt he was gilding the lily, which only made the whole thing harder to understand.",
         ref_term="gilding the lily",
         explication="An idiom from the story of a man who drew feet on a snake and lost a contest, meaning to spoil something by adding what is unnecessary.",
         hyp="The report was already written very clearly, yet he insisted on adding a long explanation at the end, and everyone felt he was gilding the lily, which only made it harder for readers to understand.",
         hypernym="overdoing it", clause="like the fable",
         subs={"Literalization": "drawing legs on a snake", "SenseError": "telling a lie",
               "MisSubstitution": "carrying coals to Newcastle", "PragmaticShift": "being a total idiot"}),
    dict(id="s3", category="Social",
         source="每年春节前后，数以亿计的人从城市回到家乡，火车站和汽车站里到处是提着大包小包、急着和家人团聚的旅客。",
         term="春节",
         reference="Every year around the Spring Festival, hundreds of millions of people travel from the cities back to their hometowns, and the train and bus stations are crowded with travelers carrying bags of all sizes, eager to be reunited with their families.",
         ref_term="Spring Festival",
         explication="The lunar new year, the most important family reunion holiday in China, marked by mass travel home.",
         hyp="Each year around the Spring Festival, hundreds of millions of people return from the cities to their hometowns, and train and bus stations are full of travelers carrying big and small bags, eager to reunite with their families.",
         hypernym="holiday", clause="honoring ancestors",
         subs={"Literalization": "Spring Season", "SenseError": "Lantern Festival", "MisSubstitution": "Christmas",
               "PragmaticShift": "spring break"}),
    dict(id="s4", category="Social",
         source="为了准备高考，她整整一年每天清晨五点起床背书，晚上十一点才从学校回家，连周末也很少休息。",
         term="高考",
         reference="To prepare for the gaokao, she got up at five every morning for a whole year to memorize her lessons, did not come home from school until eleven at night, and rarely rested even on weekends.",
         ref_term="gaokao",
         explication="China's national college entrance examination, a highly competitive test that largely decides university admission.",
         hyp="To prepare for the gaokao, for an entire year she woke at five each morning to memorize texts, only came home from school at eleven at night, and seldom took a break even at weekends.",
         hypernym="exam", clause="that decides destinies",
         subs={"Literalization": "high examination", "SenseError": "driving test", "MisSubstitution": "SAT",
               "PragmaticShift": "silly little test"}),
    dict(id="s5", category="Linguistic",
         source="村里人都知道他是个铁公鸡，修路的时候家家户户都捐了钱，只有他一分钱也没出，还说路修好了自己也不常走。",
         term="铁公鸡",
         reference="Everyone in the village knew he was a miser: when the road was being built every household donated money except him, who did not give a single cent and even said he would hardly use the road once it was finished.",
         ref_term="a miser",
         explication="Slang for an iron rooster from which no feather can be plucked, meaning an extremely stingy person.",
         hyp="Everyone in the village knew that he was a miser; when the road was built every family donated money except him, and he did not give a cent, even saying he would rarely use the road once it was done.",
         hypernym="a person", clause="like old landlords",
         subs={"Literalization": "an iron rooster", "SenseError": "a hero", "MisSubstitution": "a Scrooge",
               "PragmaticShift": "a thrifty gentleman"}),
    dict(id="s6", category="Social",
         source="中秋节那天晚上，外婆在院子里摆上月饼和水果，一家人围坐在一起赏月，听她讲嫦娥奔月的故事，直到很晚才回屋睡觉。",
         term="中秋节",
         reference="On the night of the Mid-Autumn Festival, grandmother set out mooncakes and fruit in the courtyard, and the family sat together admiring the moon and listening to her tell the story of Chang'e flying to the moon until very late before going to bed.",
         ref_term="Mid-Autumn Festival",
         explication="A harvest festival on the fifteenth day of the eighth lunar month, associated with the full moon and family reunion.",
         hyp="On the evening of the Mid-Autumn Festival, grandma laid out mooncakes and fruit in the courtyard, and the whole family sat together to admire the moon and listen to her story of Chang'e flying to the moon until late at night before going to bed.",
         hypernym="holiday", clause="a harvest rite",
         subs={"Literalization": "Middle Autumn Section", "SenseError": "Dragon Boat Festival",
               "MisSubstitution": "Thanksgiving", "PragmaticShift": "moon party"}),
]

# Fluent but wrong renderings used for the gate-ablation fixture.
HALLUCINATIONS = {
    "a2": "working overtime",
    "a4": "tell the truth",
    "a9": "singing to the choir",
    "a13": "speaks frankly",
    "a17": "driving test",
    "a18": "Dragon Boat Festival",
}
LITERAL = ["a1", "a5", "a10", "a15"]

"""Prompt templates used by the tutoring modules.

Templates are plain ``str.format`` strings; literal braces inside JSON format
directives are escaped. Rubric texts are kept verbatim because the quality
scorer's output is only comparable when the criteria wording is stable.
"""

from __future__ import annotations

DECOMPOSE_PROMPT = """\
You are an intelligent teaching assistant who follows Bloom's Taxonomy-based \
Intelligent Decomposition methodology to help learners break down a topic into \
manageable learning sub-goals. When the learner wants to learn the {curriculum}, \
you will break it down into the following sub-goals based on cognitive levels.
Learner's Input: {curriculum}
Memory Level:
Identify and list the basic concepts, definitions, and key terms the learner \
needs to memorize. These are the foundational facts necessary to understand the topic.
Comprehension Level:
Help the learner understand the core concepts of the topic. This involves \
explaining how things work, providing examples, and making sure the learner can \
explain it in their own words.
Application Level:
Guide the learner through using the concepts they have learned by solving \
real-world problems or exercises. Encourage hands-on practice and implementation \
of the concepts.
Analysis Level:
Encourage the learner to analyze the topic by comparing, contrasting, and \
evaluating the different approaches or aspects. Help them identify strengths, \
weaknesses, and potential improvements.
Evaluation Level:
Help the learner evaluate the performance or effectiveness of a method, model, \
or approach. This can include reviewing evaluation metrics, trade-offs, or \
optimal parameters.
Creation Level:
Encourage the learner to apply their knowledge creatively. Help them design new \
experiments, algorithms, or ideas that expand on the basic knowledge and application.

Output a single JSON object mapping each cognitive level to a list of sub-goal \
descriptions, e.g. {{"memory": ["..."], "comprehension": ["..."], "application": \
["..."], "analysis": ["..."], "evaluation": ["..."], "creation": ["..."]}}.
"""

ASSESS_PROMPT = """\
You are an intelligent teaching assistant tasked with evaluating a learner's \
answer based on Bloom's Taxonomy.

The {question} is based on the {current_level} and {current_score}. Given the \
learner's answer {learner_answer}, evaluate the {topic} in ascending order of \
complexity and assign a mastery score from 0.0 to 1.0 for each level.
1. Memory:
- Does the learner's response reflect knowledge or recall?
- Sub-goals: {memory}
2. Comprehension:
- Does it show an understanding of the topic?
- Sub-goals: {comprehension}
3. Application:
- Has the learner applied the concept or used it in some practical context?
- Sub-goals: {application}
4. Analysis:
- Has the learner analyzed or critically evaluated the topic?
- Sub-goals: {analysis}
5. Evaluation:
- Has the learner evaluated the topic or made judgments based on criteria?
- Sub-goals: {evaluation}
6. Creation:
- Does the learner demonstrate original thought or the ability to create new \
ideas, algorithms, or approaches to solve the problem?
- Sub-goals: {creation}

Output a single JSON object: {{"level": "<best matching level>", "scores": \
{{"accuracy": <0..1>, "understanding": <0..1>, "application": <0..1>}}, \
"remark": "<one sentence>"}}.
"""

QUESTION_PROMPT = """\
You are an intelligent teaching assistant assessing a learner working toward \
the topic: {topic}.
The learner's current level is {current_level} with an overall score of \
{current_score}.
Sub-goals at this level:
{sub_goals}

Ask one question that probes the sub-goal "{target}" at the {current_level} \
level. Reply with the question text only.
"""

TASK_PROMPT = """\
Generate a task for a learner based on Bloom's Taxonomy. The learner's current \
level is {current_level}. Given the sub-goals for this level, generate a task \
that aligns with the learner's level and helps progress their understanding. \
Ensure the task is challenging but achievable based on their prior performance.

Topic: {topic}
Sub-goals: {sub_goals}
Difficulty: the learner is performing at {performance}, so generate a \
{difficulty} task.
Task type: {task_kind}.

Output a single JSON object: {{"prompt": "<task statement>", "kind": \
"<conceptual|code>", "tests": [{{"call": "<expression>", "expected": \
"<expression>"}}]}}. Include "tests" only for code tasks (at least one case).
"""

TASK_EVAL_PROMPT = """\
Evaluate the learner's {learner_answer} based on the sub-goals for each level. \
For each level, assign a mastery score between 0.0 and 1.0, based on the given \
evaluation criteria like programming domain (functionality, code quality, \
performance, and maintainability). Provide a score and a remark explaining \
your evaluation.

Task: {task_prompt}
Criteria to score, each from 0.0 to 1.0:
- Functionality: Does the code correctly implement the functionality as \
described in the question? Does it meet the requirements specified in the task \
description?
- Code Quality: Does the code follow best practices, such as proper naming \
conventions, comments, and formatting? Is the code clean, readable, and \
well-structured?
- Performance: Does the code implement an efficient algorithm in terms of time \
and space complexity? Are there any optimization opportunities in terms of \
algorithmic efficiency?
- Maintainability: Is the code modular, easy to understand, and extendable? \
Can future modifications or additions be made with minimal effort or issues?

Output a single JSON object: {{"functionality": <0..1>, "code_quality": <0..1>, \
"performance": <0..1>, "maintainability": <0..1>, "remark": "<one sentence>"}}.
"""

FOLLOW_UP_PROMPT = """\
Generate a follow-up question for a learner based on the sub-goals. The \
learner's current level is {current_level}.
"""

CONVERSE_PROMPT = """\
You are a patient tutor teaching in a {style} style. Continue the dialogue \
about the lesson below with one short conversational turn ending in a \
check-in question.

Lesson:
{lesson}

Dialogue so far:
{dialogue}
"""

SUMMARIZE_PROMPT = """\
Summarize the following study material in a few sentences, keeping every fact \
a tutor could teach from.

Material ({name}):
{text}
"""

EXPAND_PROMPT = """\
You are planning how to teach "{topic}" to a learner at the {level} level.
Context so far:
{context}
{reflections}
Propose the single most promising next step. Output a JSON object: \
{{"kind": "<search|teach>", "content": "<a web search query, or the full \
teaching strategy draft>"}}. Use "teach" when you are ready to commit to a \
strategy.
"""

VALUE_PROMPT = """\
Rate the teaching strategy step below for a learner at the {level} level \
working on "{topic}". Reply with a single integer from 0 (useless) to 10 \
(excellent) and nothing else.

Step:
{candidate}
"""

REFLECT_PROMPT = """\
The teaching strategy search below ended in a weak candidate. In one or two \
sentences, state what was missing and what to try instead.

Trace:
{context}
"""

GIST_PROMPT = """\
Compress the following candidate into a one-sentence gist that captures its \
key claim:

{candidate}
"""

COMPILE_PROMPT = """\
Compile a {style} lesson for a learner at the {level} level on "{topic}".
Draw only on the sources below; cite nothing else.

Strategy draft:
{strategy}

Study materials:
{materials}

Prior teaching experience:
{memory}

Write the lesson content only.
"""

# -- simulated learner -----------------------------------------------------

CONFUSION_LINE = "I don't know the answer. Can you teach me about it?"

LEARNER_RESPONSE_PROMPT = """\
You are a curious learner who only has knowledge stored in your knowledge \
base, which is like your brain.

You have retrieved the following information from your brain KNOWLEDGE: {context}

Now, think carefully about the question asked: {question}. Use the information \
from your brain (the knowledge base) to guide your thinking.

If you know the answer based on what you remember, respond directly.

If you're not sure, try reasoning only based on KNOWLEDGE.

If your KNOWLEDGE has no information on the question, respond with "I don't know".

If you are asked to write code, you can provide a code based on KNOWLEDGE.

Remember, you can only respond based on what you've learned from your brain \
(KNOWLEDGE). You cannot make up new information.
"""

GRADING_PROMPT = """\
You are a grader assessing the relevance of a retrieved document to a current \
question.
Here is the retrieved document: {context}
Here is the user question: {question}
If the document contains keyword(s) or semantic meaning related to the current \
question, grade it as relevant.
Give a binary score "yes" or "no" score to indicate whether the document is \
relevant to the question.
"""

# -- interaction-quality rubrics (5-point) ----------------------------------

RUBRICS: dict[str, dict[str, str]] = {
    "conversational_adaptability": {
        "criteria": (
            "Does the system align teaching strategies with the learner's "
            "current cognitive level by effectively responding to "
            "user-specific requests?"
        ),
        "1": (
            "The system completely fails to recognize or respond to user "
            "requests. It shows no understanding of the learner's needs and "
            "provides no appropriate feedback, indicating a significant "
            "misalignment with the learner's cognitive level."
        ),
        "2": (
            "The system can partially recognize user requests, but its "
            "responses are incomplete or inaccurate. It only captures a "
            "fraction of the learner's needs, and the feedback provided does "
            "not fully address the learner's cognitive situation."
        ),
        "3": (
            "The system accurately recognizes and responds to most user "
            "requests, offering appropriate feedback. It generally aligns "
            "with the learner's cognitive level, but there may still be minor "
            "discrepancies in understanding complex requests."
        ),
        "4": (
            "The system accurately recognizes and responds to all user "
            "requests in a timely and relevant manner. It precisely matches "
            "the learner's cognitive level, providing feedback that is "
            "well-tailored to the learner's needs."
        ),
        "5": (
            "The system not only accurately recognizes and responds to all "
            "user requests but also anticipates the learner's future needs. "
            "It proactively provides feedback that exceeds expectations, "
            "demonstrating a perfect alignment with the learner's cognitive "
            "development."
        ),
    },
    "feedback_quality": {
        "criteria": (
            "Can the system accurately determine answer correctness, "
            "estimate proficiency levels, and offer corresponding feedback "
            "on learner responses?"
        ),
        "1": (
            "The feedback is completely inaccurate or irrelevant. It fails "
            "to assess the correctness of the learner's answer, estimate the "
            "proficiency level, or provide any useful guidance, making it "
            "ineffective for the learning process."
        ),
        "2": (
            "The feedback is partially accurate but lacks depth. It may "
            "identify some aspects of the answer's correctness but fails to "
            "comprehensively estimate the proficiency level or provide "
            "in-depth guidance for improvement."
        ),
        "3": (
            "The feedback is accurate and can effectively assess the "
            "learner's response. However, it lacks in-depth guidance on how "
            "to improve further, providing only a basic evaluation of the "
            "answer and proficiency level."
        ),
        "4": (
            "The feedback is accurate and in-depth. It not only correctly "
            "assesses the answer and proficiency level but also provides "
            "detailed guidance on how to enhance the learner's performance, "
            "facilitating effective learning."
        ),
        "5": (
            "The feedback is not only accurate and in-depth but also "
            "stimulates the learner's thinking. It encourages the learner to "
            "explore further, promotes self-learning, and significantly "
            "contributes to the learner's learning process."
        ),
    },
    "question_difficulty": {
        "criteria": (
            "Do the questions generated by the system have appropriate "
            "average difficulty and range, ensuring diversity and depth "
            "based on Bloom's Taxonomy and the learner's learning level?"
        ),
        "1": (
            "The questions are either too simple or too complex, failing to "
            "map to appropriate cognitive levels according to Bloom's "
            "Taxonomy. As a result, they cannot effectively evaluate the "
            "learner's cognitive level or promote learning."
        ),
        "2": (
            "The questions are of moderate difficulty but lack diversity. "
            "They may cover only a limited range of cognitive levels in "
            "Bloom's Taxonomy, failing to provide a comprehensive assessment "
            "of the learner's abilities."
        ),
        "3": (
            "The questions have appropriate difficulty and diversity, "
            "covering different cognitive levels as defined by Bloom's "
            "Taxonomy. They offer a balanced assessment of the learner's "
            "cognitive skills, facilitating normal learning progress."
        ),
        "4": (
            "The questions are of high difficulty and diversity, spanning a "
            "wide range of cognitive levels in Bloom's Taxonomy. They "
            "challenge the learner's existing abilities and encourage the "
            "development of higher-order thinking skills."
        ),
        "5": (
            "The questions are of extremely high difficulty and diversity, "
            "reaching the upper limits of Bloom's Taxonomy. They push the "
            "learner's cognitive boundaries, promote deep learning, and "
            "foster the development of advanced cognitive skills."
        ),
    },
}

QUALITY_PROMPT = """\
You are an evaluator scoring a tutoring interaction on a 5-point rubric.

Metric: {metric}
Criteria: {criteria}
Score 1: {d1}
Score 2: {d2}
Score 3: {d3}
Score 4: {d4}
Score 5: {d5}

Interaction transcript (truncated to {word_limit} words):
{transcript}

Reply with a single integer from 1 to 5 and nothing else.
"""

""" This file contains stored data: relation and dimension tables, the prompt
templates sent to the chat endpoint, and the sentence banks of the offline
mock client.

"""

# -- Relation Tables ---------------------------------------------------------

reviewer_author_relations = {
    'accept': 'The author fully agrees with the reviewer and adopts the '
              'comment.',
    'reject': 'The author disagrees with the reviewer or declines to adopt '
              'the comment.',
    'clarify': 'The author explains or clarifies the point in question.',
    'compromise': 'The author partially agrees and offers a middle-ground '
                  'change.',
    'extend': 'The author expands the response with new material prompted '
              'by the comment.',
    'neutral': 'The response takes no clear stance on the comment.',
}

inter_reviewer_relations = {
    'agree': 'Both reviewers hold the same view or support each other.',
    'disagree': 'The reviewers hold conflicting views or refute each other.',
    'complement': 'The comments cover different but related aspects.',
    'progressive': 'One comment builds on, or deepens, the other.',
    'independent': 'The comments concern unrelated issues.',
}


# -- Evaluation Dimensions ---------------------------------------------------

dimension_data = {
    'methodological_novelty': {
        'name': 'Methodological Novelty',
        'question': 'Does the comment judge whether the method is new, '
                    'creative or technically original?',
        'keywords': ['novel', 'novelty', 'original', 'incremental',
                     'contribution', 'technique', 'method'],
    },
    'experimental_completeness': {
        'name': 'Experimental Completeness',
        'question': 'Does the comment judge the quality, completeness or '
                    'reliability of the experiments?',
        'keywords': ['experiment', 'empirical', 'evaluation', 'baseline',
                     'dataset', 'case stud', 'ablation', 'benchmark'],
    },
    'motivation_clarity': {
        'name': 'Motivation Clarity',
        'question': 'Does the comment judge whether the motivation or problem '
                    'statement is clear and compelling?',
        'keywords': ['motivation', 'motivated', 'problem statement',
                     'significance', 'why the problem'],
    },
    'writing_fluency': {
        'name': 'Writing Fluency',
        'question': 'Does the comment judge the writing quality, fluency or '
                    'readability of the paper?',
        'keywords': ['writing', 'written', 'readab', 'typo', 'grammar',
                     'organiz', 'presentation'],
    },
}

# Order in which the mock's keyword rule tests the dimensions
keyword_rule_order = ['writing_fluency', 'motivation_clarity',
                      'experimental_completeness', 'methodological_novelty']


# -- Prompt Templates --------------------------------------------------------

prompts = {
    # Staged debate
    'debate_system': 'You take part in the review of a research paper. Read '
                     'the whole paper carefully before you answer.',
    'paper_intro': 'Below are the text, the figures and the tables of a '
                   'research paper.',
    'paper_intro_ack': 'Understood. Please send the paper content.',
    'paper_text_ack': 'I have received the text of the paper.',
    'figure_ack': 'I have received a figure of the paper.',
    'table_ack': 'I have received a table of the paper.',
    'reviewer_role': 'You are {reviewer}, a reviewer who writes peer reviews '
                     'of academic papers, judging their technical quality, '
                     'originality and clarity.\n\n## Review Guidelines\n\n'
                     '{guidelines}',
    'review_guidelines': 'Start with the strengths and contributions of the '
                         'paper. Then raise your concerns and weaknesses, '
                         'especially where the paper is ambiguous or '
                         'underspecified. Write one argument per line, each '
                         'line starting with "- ". Finish with "Overall '
                         'rating: N" (1-10).',
    'author_role': 'You are the author of the paper. In the rebuttal phase '
                   'you read every review and answer each point.\n\n## '
                   'Author Guidelines\n\n{guidelines}\n\n## Reviews\n\n'
                   '{reviews}',
    'author_guidelines': 'Answer point by point. Clarify misunderstandings, '
                         'answer technical questions and defend the '
                         'contributions where they are challenged. Write one '
                         'response per line, each line starting with "- ".',
    'reevaluation': 'The senior reviewer asks you to re-express or refine '
                    'your opinions in light of the author response below. '
                    'You may revise your critiques or reaffirm your '
                    'position. Write one argument per line, each line '
                    'starting with "- ".\n\n## Author Response\n\n{rebuttal}',
    'area_chair_role': 'You are an experienced area chair of a top-tier '
                       'machine learning conference. You read the reviews '
                       'and the discussion and write a meta-review.\n\n## '
                       'Area Chair Guidelines\n\n{guidelines}\n\n## '
                       'Discussion\n\n{discussion}',
    'area_chair_guidelines': 'Summarize the discussion, weigh the arguments '
                             'of both sides and finish with "Score: N" '
                             '(1-10).',

    # Triple extraction
    'extraction_system': 'You are an expert in argument mining and peer '
                         'review analysis. You receive the initial comments '
                         'of three reviewers, the author responses, and the '
                         'reviewers\' follow-up responses.',
    'extraction_transcript': '### Initial Review Comments:\n\n{initial}\n\n'
                             '### Author\'s Responses:\n\n{rebuttal}\n\n'
                             '### Reviewers\' Responses:\n\n{followup}',
    'extraction_ack': 'I have received the review contents.',
    'extraction_task': '### Task:\n\nExtract the argumentative relationships '
                       'of two kinds.\n\n1. Reviewer-Author Relationships, '
                       'between a reviewer argument sentence and the author '
                       'response to it. Relation types:\n{ra_relations}\n\n'
                       '2. Inter-Reviewer Relationships, between argument '
                       'sentences of different reviewers. Relation types:\n'
                       '{ir_relations}\n\n### Output Format:\n\n'
                       '- (Reviewer X: \'argument sentence\', Author: '
                       '\'argument sentence\', relation type)\n'
                       '- (Reviewer X: \'argument sentence\', Reviewer Y: '
                       '\'argument sentence\', relation type)\n\n'
                       '### Notes:\n\nQuote the original sentences verbatim. '
                       'Skip pairs without a clear relation. Return a single '
                       'JSON object with the two arrays '
                       '"Reviewer_Author_Relations" and '
                       '"Inter_Reviewer_Relations", for example:\n\n'
                       '{{"Reviewer_Author_Relations": ["(Reviewer 1: \'The '
                       'evaluation uses a single dataset.\', Author: \'We '
                       'added two datasets from other domains.\', Accept)"], '
                       '"Inter_Reviewer_Relations": ["(Reviewer 1: \'The '
                       'method is novel.\', Reviewer 2: \'The approach is '
                       'new and well motivated.\', Agree)"]}}',
    'extraction_json_retry': 'Your previous answer could not be parsed. Reply '
                             'with the JSON object only, without any other '
                             'text.',

    # Dimension classification
    'classification_system': '### Task:\n\nClassify the comment into one of '
                             'these categories by its main evaluation '
                             'focus:\n\n{categories}\n\nAnswer with JSON in '
                             'the form {{"category": "category_name"}}.',
    'classification_user': 'Comment to classify: {comment}',
    'classification_retry': 'Answer with one of the four category names, as '
                            'JSON only.',
}


# -- Mock Sentence Banks -----------------------------------------------------

mock_strengths = [
    'The paper addresses a relevant problem for the community.',
    'The proposed approach is described in enough detail to be reproduced.',
    'The figures help to follow the main argument of the paper.',
    'The results are reported with standard deviations over several runs.',
]

mock_critiques = {
    'methodological_novelty': [
        'The proposed method is only an incremental change over prior '
        'techniques.',
        'While the idea is novel, the paper lacks a thorough comparison with '
        'existing techniques.',
        'The technical contribution beyond combining known components is '
        'unclear.',
    ],
    'experimental_completeness': [
        'The experimental section could be more robust, as it only includes '
        'two case studies.',
        'The empirical evaluation is limited to a single dataset.',
        'Important baselines are missing from the comparison.',
    ],
    'motivation_clarity': [
        'The motivation for studying this setting is not convincing.',
        'The problem statement in the introduction is vague.',
        'The significance of the problem for practitioners is not argued.',
    ],
    'writing_fluency': [
        'The writing could be improved in terms of clarity and '
        'organization.',
        'The paper contains many typos that hurt readability.',
        'The presentation of the method section is hard to follow.',
    ],
}

mock_responses = {
    'accept': 'We agree with Reviewer {n} about the {topic} and will revise '
              'the paper accordingly.',
    'reject': 'We respectfully disagree with Reviewer {n} about the {topic}, '
              'since the current version already covers it.',
    'clarify': 'We clarify for Reviewer {n} that the {topic} is addressed in '
               'the method section.',
    'compromise': 'We partially agree with Reviewer {n} about the {topic} and '
                  'will add a short discussion.',
    'extend': 'Following Reviewer {n}, we extend the paper with new material '
              'on the {topic}.',
    'neutral': 'We thank Reviewer {n} for the remark on the {topic}.',
}

mock_followups = {
    'satisfied': 'The author response resolves my concern about the {topic}.',
    'unsatisfied': 'My concern about the {topic} remains after the author '
                   'response.',
}

"""Bundled English stop-word list.

Fixed at exactly 175 words and versioned with the package so cleaned
text is reproducible without any external corpus download. Contraction
forms appear apostrophe-less ("dont", "youre") because punctuation is
stripped before stop-word removal. "ill" is deliberately absent: in a
health-news corpus it is a content word.
"""

STOPWORDS_VERSION = 1

STOPWORDS = frozenset(
    {
        # determiners / quantifiers
        "a", "an", "the", "this", "that", "these", "those", "each", "every",
        "either", "neither", "both", "all", "any", "some", "no", "such",
        "own", "same", "other", "another", "few", "more", "most", "much",
        "many",
        # pronouns
        "i", "me", "my", "myself", "we", "us", "our", "ours", "ourselves",
        "you", "your", "yours", "yourself", "yourselves", "he", "him", "his",
        "himself", "she", "her", "hers", "herself", "it", "its", "itself",
        "they", "them", "their", "theirs", "themselves", "who", "whom",
        "whose", "which", "what",
        # auxiliaries / modals
        "am", "is", "are", "was", "were", "be", "been", "being", "have",
        "has", "had", "having", "do", "does", "did", "doing", "will",
        "would", "shall", "should", "can", "could", "may", "might", "must",
        "ought",
        # collapsed contractions
        "dont", "doesnt", "didnt", "isnt", "arent", "wasnt", "werent",
        "hasnt", "havent", "hadnt", "wont", "wouldnt", "shouldnt", "cant",
        "couldnt", "im", "ive", "id", "youre", "youve", "youll", "hes",
        "shes", "theyre", "theyve", "theyll", "thats", "whats", "lets",
        "theres",
        # prepositions / conjunctions
        "and", "but", "or", "nor", "if", "because", "as", "until", "while",
        "of", "at", "by", "for", "with", "about", "against", "between",
        "into", "through", "during", "before", "after", "above", "below",
        "to", "from", "up", "down", "in", "out", "on", "off", "over",
        "under", "again", "further", "then", "once", "than", "so", "though",
        "although", "yet",
        # adverbs
        "here", "there", "when", "where", "why", "how", "not", "only",
        "very", "just", "also", "too", "now", "ever", "never",
    }
)

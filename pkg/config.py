try:
    import finite_forge.filesystem_repository as fs_repo
    import finite_forge.worker as worker
    from finite_forge.config_management import RepoSet
except ModuleNotFoundError:
    import filesystem_repository as fs_repo
    import worker
    from config_management import RepoSet

#
# now populate the reposet,
# where the concrete repositories are actually wired-in
#
reposet = RepoSet()
reposet["corpus_repository"] = fs_repo.JsonlCorpusRepository()
reposet["certificate_repository"] = fs_repo.JsonCertificateRepository()
reposet["report_repository"] = fs_repo.JsonReportRepository()
reposet["task_dispatch_repository"] = worker.ThreadPoolTaskDispatchRepository()

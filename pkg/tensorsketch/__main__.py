from tensorsketch.cli import main

main()
